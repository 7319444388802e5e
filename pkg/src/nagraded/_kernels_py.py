"""Pure-Python max-plus kernels; same API as the compiled ``_kernels``.

Arrays are lists of ints (1-D) or lists of equal-length lists (2-D).  The
value ``NEG`` stands for minus infinity and absorbs everything it meets.
"""

NEG = -(1 << 62)


def maxplus_conv1(a, b):
    out = [NEG] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == NEG:
            continue
        for j, y in enumerate(b):
            if y != NEG and x + y > out[i + j]:
                out[i + j] = x + y
    return out


def maxplus_conv2(a, b):
    na, ma = len(a), len(a[0])
    nb, mb = len(b), len(b[0])
    out = [[NEG] * (ma + mb - 1) for _ in range(na + nb - 1)]
    cells = [(j, l, y) for j, row in enumerate(b) for l, y in enumerate(row) if y != NEG]
    for i, row in enumerate(a):
        for k, x in enumerate(row):
            if x == NEG:
                continue
            for j, l, y in cells:
                r = out[i + j]
                if x + y > r[k + l]:
                    r[k + l] = x + y
    return out

import math


def fft(xs):
    n = len(xs)
    if n == 1:
        return [[xs[0], 0.0]]
    even = fft(xs[0::2])
    odd = fft(xs[1::2])
    out = []
    for k in range(n):
        out.append([0.0, 0.0])
    half = n // 2
    for k in range(half):
        angle = -2 * math.pi * k / n
        c = math.cos(angle)
        s = math.sin(angle)
        re = c * odd[k][0] - s * odd[k][1]
        im = c * odd[k][1] + s * odd[k][0]
        out[k] = [even[k][0] + re, even[k][1] + im]
        out[k + half] = [even[k][0] - re, even[k][1] - im]
    return out

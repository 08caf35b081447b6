import math


def rotate(point, axis, degrees):
    theta = math.radians(degrees)
    c = math.cos(theta)
    s = math.sin(theta)
    x = point[0]
    y = point[1]
    z = point[2]
    if axis == 0:
        return [x, y * c - z * s, y * s + z * c]
    if axis == 1:
        return [x * c + z * s, y, -x * s + z * c]
    return [x * c - y * s, x * s + y * c, z]

"""Independent reference computations used by several test modules."""

import math

import numpy as np


def kepler_bisection(M, e, tol=1e-13):
    """E on [M - e, M + e] by bisection; f(E) = E - e sin E - M is monotone."""
    lo, hi = M - e, M + e
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid - e * math.sin(mid) - M > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)))


def cofactor_inverse(m):
    """Inverse by adjugate / determinant, pure Python."""
    m = [list(map(float, row)) for row in m]
    n = len(m)
    d = _det(m)
    return [
        [(-1) ** (i + j) * _det([row[:i] + row[i + 1:] for k, row in enumerate(m) if k != j]) / d
         for j in range(n)]
        for i in range(n)
    ]


def pdop_cofactor(user, sats):
    rows = []
    for s in sats:
        d = [s[k] - user[k] for k in range(3)]
        r = math.sqrt(sum(c * c for c in d))
        rows.append([c / r for c in d] + [1.0])
    normal = [[sum(row[i] * row[j] for row in rows) for j in range(4)] for i in range(4)]
    q = cofactor_inverse(normal)
    return math.sqrt(q[0][0] + q[1][1] + q[2][2])


def rot1(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[1, 0, 0], [0, c, s], [0, -s, c]])


def rot3(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, s, 0], [-s, c, 0], [0, 0, 1]])


def orbit_position(a, e, inc, raan, argp, M):
    """Inertial position from classical elements via rotation matrices."""
    E = kepler_bisection(M, e)
    x_pf = np.array([a * (math.cos(E) - e), a * math.sqrt(1 - e * e) * math.sin(E), 0.0])
    return rot3(-raan) @ rot1(-inc) @ rot3(-argp) @ x_pf

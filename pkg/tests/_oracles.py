"""Independent reference implementations used only by the test suite.

These deliberately avoid the code paths under test: the exponential is a plain
Taylor series with scaling and squaring, the logarithm a Mercator series with
inverse scaling, transports come from closed-form constant-coefficient
solutions, and exterior derivatives are evaluated analytically.
"""

import numpy as np


def taylor_expm(m, terms=24, max_norm=0.5):
    """Scaling-and-squaring matrix exponential with a Taylor kernel."""
    m = np.asarray(m, dtype=float)
    norm = np.linalg.norm(m)
    squarings = 0
    while norm > max_norm:
        m = m / 2.0
        norm /= 2.0
        squarings += 1
    out = np.eye(m.shape[0])
    term = np.eye(m.shape[0])
    for k in range(1, terms + 1):
        term = term @ m / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def series_logm(g, terms=60, tol=1e-14):
    """Principal log via inverse scaling (repeated sqrt) plus Mercator series."""
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    scalings = 0
    import scipy.linalg

    while np.linalg.norm(g - np.eye(n)) > 0.25 and scalings < 60:
        g = scipy.linalg.sqrtm(g).real
        scalings += 1
    x = g - np.eye(n)
    out = np.zeros_like(x)
    term = np.eye(n)
    for k in range(1, terms + 1):
        term = term @ x
        out = out + ((-1) ** (k + 1)) * term / k
        if np.linalg.norm(term) / k < tol:
            break
    return out * (2.0**scalings)


def so3_hat(w):
    return np.array(
        [[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]]
    )


def constant_coefficient_transport(a_matrix, t, g0):
    """Closed-form solution of g' = -[A, g] = (Ad_g A - A) g for constant A."""
    e = taylor_expm(-t * a_matrix)
    return e @ g0 @ np.linalg.inv(e)


def affine_transport_oracle(nu, gamma, length, y0):
    """Endpoint of y' = -(N y + G) over a straight run of given length.

    Augmented-matrix exponential of the constant system d/dt [y;1] =
    -[[N, G],[0,0]] [y;1].
    """
    m = nu.shape[0]
    big = np.zeros((m + 1, m + 1))
    big[:m, :m] = -nu
    big[:m, m] = -gamma
    e = taylor_expm(length * big)
    out = e @ np.concatenate([y0, [1.0]])
    return out[:m]


def central_jacobian(f, x, h=1e-6):
    """Plain central-difference Jacobian, independent of the package's."""
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(x.size):
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        cols.append((np.asarray(f(xp), float) - np.asarray(f(xm), float)) / (2 * h))
    return np.column_stack(cols)


def observed_order(errors, ratios=2.0):
    """Median convergence order from a sequence of errors at halving steps."""
    errors = [max(e, 1e-300) for e in errors]
    orders = [np.log(errors[i] / errors[i + 1]) / np.log(ratios) for i in range(len(errors) - 1)]
    return float(np.median(orders))

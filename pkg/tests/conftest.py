import math


def rel_close(got, want, tol=1e-9):
    return abs(got - want) <= tol * max(1.0, abs(want))


def assert_rel(got, want, tol=1e-9, what=""):
    assert rel_close(got, want, tol), f"{what} got {got!r}, want {want!r} (tol {tol:g})"


def factorial_table(n_max=20):
    out = {0: 1}
    for n in range(1, n_max + 1):
        out[n] = out[n - 1] * n
    return out


def uniform_grid(lo, hi, n):
    return [lo + i * (hi - lo) / (n - 1) for i in range(n)]


def log_uniform(rng, lo, hi):
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))

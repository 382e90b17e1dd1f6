"""High-precision cross-checks of the closed forms against mpmath oracles."""

import pytest

mpmath = pytest.importorskip("mpmath")
from mpmath import exp, findroot, log, mp, mpf  # noqa: E402

try:
    import _bregkit as bk
except ImportError:
    from bregkit import _bregkit as bk

mp.dps = 80


def close(got, want, tol=1e-13):
    want = float(want)
    assert abs(float(got) - want) <= tol * max(1.0, abs(want))


def divergence_oracle(b, b_prime, x, y):
    gy = b_prime(y)
    return b(x) - b(y) - sum(g * (xi - yi) for g, xi, yi in zip(gy, x, y))


def test_hct_negative_q():
    q = mpf(-1)
    x = [mpf("0.37"), mpf("2.9")]
    y = [mpf("1.21"), mpf("0.55")]
    b = lambda v: sum(vi**q - 1 for vi in v) / (1 - q)
    bp = lambda v: [abs(q) / (q - 1) * vi ** (q - 1) for vi in v]
    spec = bk.hct(-1.0, 2)
    close(bk.value(spec, [float(v) for v in x]), b(x))
    close(
        bk.divergence(spec, [float(v) for v in x], [float(v) for v in y]),
        divergence_oracle(b, bp, x, y),
    )


def test_l2lp_signed_coordinates():
    p = mpf("1.5")
    x = [mpf("-1.3"), mpf("0.4"), mpf("2.2")]
    y = [mpf("0.9"), mpf("-2.1"), mpf("0.3")]
    b = lambda v: (sum(abs(t) ** p for t in v)) ** (2 / p) / 2
    def bp(v):
        s = sum(abs(t) ** p for t in v)
        return [s ** (2 / p - 1) * abs(t) ** (p - 1) * (1 if t > 0 else -1) for t in v]
    spec = bk.l2lp(1.5, 3)
    close(
        bk.divergence(spec, [float(v) for v in x], [float(v) for v in y]),
        divergence_oracle(b, bp, x, y),
    )


def test_ell2_pair_blocks():
    x = [mpf("0.7"), mpf("-1.1"), mpf("1.3"), mpf("0.2")]
    y = [mpf("-0.3"), mpf("0.8"), mpf("0.1"), mpf("-0.9")]
    pair = lambda t1, t2: exp((t1 + t2) ** 2) + exp((t1 - t2) ** 2) - 2
    b = lambda v: pair(v[0], v[1]) + pair(v[2], v[3])
    def bp(v):
        g = []
        for i in (0, 2):
            s, d = v[i] + v[i + 1], v[i] - v[i + 1]
            g += [
                2 * s * exp(s**2) + 2 * d * exp(d**2),
                2 * s * exp(s**2) - 2 * d * exp(d**2),
            ]
        return g
    spec = bk.ell2_type(1, 2)
    close(
        bk.divergence(spec, [float(v) for v in x], [float(v) for v in y]),
        divergence_oracle(b, bp, x, y),
    )


def test_iterated_log_hessian():
    f = lambda t: -log(log(t))
    z, h = mpf("1.7"), mpf("1e-20")
    fd = (f(z + h) - 2 * f(z) + f(z - h)) / h**2
    close(bk.hessian_quadform(bk.iterated_log(1), [1.7], [1.0]), fd, 1e-12)


def test_alphabeta_alpha_one():
    a, b_ = mpf(1), mpf("0.5")
    x, y = [mpf("0.0"), mpf("3.3")], [mpf("1.9"), mpf("0.6")]
    want = sum(b_ * yi ** (b_ - 1) * (xi - yi) + yi**b_ - xi**b_ for xi, yi in zip(x, y))
    spec = bk.alpha_beta(1.0, 0.5, 2)
    close(bk.divergence(spec, [float(v) for v in x], [float(v) for v in y]), want)


def test_burg_radius_root():
    f = lambda t: mpf("0.5") * log(t / 2) - 4 - mpf("0.25") * log(1 + t)
    t2 = findroot(f, mpf("3e7"))
    close(bk.burg_rx([1.0], 1), max(mpf(65536), 2 * t2, mpf(2)), 1e-9)


def test_bgs_witness_series():
    # B(s) = 1 + s log(s/(s+1)) evaluated at high precision
    for s in (mpf(10), mpf(1e4), mpf(1e8)):
        want = 1 + s * log(s / (s + 1))
        _, _, got = bk.uc_failure_witness("bgs", float(s), 1)
        close(got, want, 1e-9)

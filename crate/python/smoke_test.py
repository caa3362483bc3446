"""Smoke test for the psu_torsion_py extension module.

Build and install it first:

    cd crates/python && maturin develop --release

then run ``python python/smoke_test.py``. Values are compared against
plain-Python recomputations using only ``math.comb`` and ``math.gcd``.
"""

import math
import sys

import psu_torsion_py as pt


def gcd_prefix(n):
    out, g = [], 0
    for k in range(1, n + 1):
        g = math.gcd(g, math.comb(n, k))
        out.append(g)
    return out


def legendre(n, p):
    total, q = 0, p
    while q <= n:
        total += n // q
        q *= p
    return total


def main():
    assert pt.factorize(360) == [(2, 3), (3, 2), (5, 1)]
    assert pt.ord(2**70 * 3, 2) == 70
    assert pt.binomial(100, 50) == math.comb(100, 50)
    assert pt.legendre(1000, 7) == legendre(1000, 7)
    assert pt.ord_binomial(64, 32, 2) == 1

    for n in range(2, 121):
        expected = gcd_prefix(n)
        for oracle in ("brute", "closed", "schubert", "spectral"):
            assert pt.bnk(n, oracle) == expected, (n, oracle)
        a = pt.ank(n)
        assert math.prod(a) == n
        assert a == [expected[k - 2] // expected[k - 1] for k in range(2, n + 1)]

    assert pt.bnk(12) == [12, 6, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1]
    assert pt.ank(12) == [2, 3, 2, 1, 1, 1, 1, 1, 1, 1, 1]
    q0, blocks = pt.partition(12)
    assert blocks == {2: [2, 4], 3: [3]}
    assert q0 == [5, 6, 7, 8, 9, 10, 11, 12]
    assert pt.strict_inequality_check(12, 2, 2, 3)

    chow = pt.chow_decomposition(12)
    assert chow == [(2, 2, [(4, 1), (2, 2), (1, 4)]), (3, 1, [(3, 1), (1, 3)])]

    ring = pt.JRing(12)
    assert ring.orders == pt.bnk(12)[:11]
    w = ring.omega(1)
    assert w.order() == 12
    assert (w * w).order() == 6
    assert (6 * w).order() == 2
    assert (w - w).is_zero()
    assert -w + w == ring.zero()
    assert ring.one().order() is None
    x = ring.element(0, [5, 7, 1])
    y = ring.element(0, [3, 0, 4])
    z = ring.element(2, [1, 1])
    assert (x + y) * z == x * z + y * z
    for k in range(2, 13):
        assert pt.theta_image(12, k).order() == pt.ank(12)[k - 2]
    assert pt.theta_orders(12) == pt.ank(12)

    assert pt.cstar_monomial(12, [3, 2]) == (6, [2, 3])
    assert pt.cstar_monomial(12, list(range(2, 13))) == (12, list(range(2, 13)))
    assert pt.top_degree_multiplier(30) == 30
    assert pt.free_rank(70) == 2**69
    poly = pt.poincare_polynomial(3)
    assert sum(poly) == 4 and len(poly) - 1 == 3**2 - 1
    assert sum(pt.poincare_polynomial(3, "U")) == 8

    verified, failures, first = pt.run_verify(2, 200, workers=2)
    assert (verified, failures, first) == (199, 0, None)
    assert len(pt.CHECK_NAMES) == 10

    for bad in (lambda: pt.factorize(1), lambda: pt.bnk(5, "nope"),
                lambda: pt.cstar_monomial(5, [1]), lambda: pt.run_verify(5, 2)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("python smoke test: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())

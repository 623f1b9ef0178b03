import math

import numpy as np
import pytest

from crackdyn.quadrature import adaptive_integrate, composite_rule


def test_rule_weights_and_segments():
    x, w, seg = composite_rule([0.0, 1.0, math.pi], 8, max_width=0.5)
    assert w.sum() == pytest.approx(math.pi, rel=1e-14)
    assert np.all((x > 0) & (x < math.pi))
    assert np.all(x[seg == 0] < 1.0) and np.all(x[seg == 1] > 1.0)
    assert np.count_nonzero(seg == 0) == 2 * 8 and np.count_nonzero(seg == 1) == 5 * 8


def test_exact_for_polynomials():
    x, w, _ = composite_rule([0.0, 2.0], 4)
    assert (x**7) @ w == pytest.approx(2.0**8 / 8, rel=1e-14)


def test_piecewise_integrand():
    # jump at the breakpoint is integrated exactly, segment by segment
    val = adaptive_integrate(lambda x, seg: np.where(seg == 0, np.sin(x), 3.0), [0.0, 1.0, 2.0])
    assert val == pytest.approx(1 - math.cos(1.0) + 3.0, rel=1e-14)


def test_vector_valued_and_oscillatory():
    k = np.arange(1, 6)[:, None]
    vals = adaptive_integrate(lambda x, seg: np.sin(k * x) ** 2, [0.0, math.pi], max_width=0.2)
    np.testing.assert_allclose(vals, math.pi / 2, rtol=1e-13)

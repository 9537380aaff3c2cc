import numpy as np
import pytest

from d1q2 import BoundarySpec, SchemeParams, SourceMode


def make_params(omega=1.6, lam=1.0, J=16, L=1.0):
    return SchemeParams(omega=omega, lam=lam, num_points=J, domain_length=L)


def make_spec(outflow, source=SourceMode.OFF, trace=None):
    return BoundarySpec(inflow_trace=trace or (lambda t: 0.0), outflow=outflow,
                        source=source)


def zero_trace(t):
    return 0.0


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

import numpy as np
import pytest

from jdrlab import decoder


def random_passive_params(n: int, rng: np.random.Generator,
                          disp_scale: float = 0.6) -> decoder.CircuitParams:
    """Random no-squeezing circuit with angles in [0, 2pi)."""
    layout = decoder.param_layout(n)
    theta = np.zeros(layout.total)
    for name in ("mesh1", "phases1"):
        s = layout.sections[name]
        theta[s] = rng.uniform(0.0, 2.0 * np.pi, s.stop - s.start)
    s = layout.sections["displacements"]
    theta[s] = rng.normal(0.0, disp_scale, s.stop - s.start)
    return decoder.CircuitParams(n, 0, False, theta)


def random_squeezing_params(n: int, rng: np.random.Generator,
                            max_r: float = 0.5) -> decoder.CircuitParams:
    layout = decoder.param_layout(n, 0, True)
    theta = np.zeros(layout.total)
    for name in ("mesh1", "phases1", "mesh2", "phases2"):
        s = layout.sections[name]
        theta[s] = rng.uniform(0.0, 2.0 * np.pi, s.stop - s.start)
    s = layout.sections["squeeze"]
    theta[s] = rng.uniform(0.0, max_r, s.stop - s.start)
    s = layout.sections["displacements"]
    theta[s] = rng.normal(0.0, 0.6, s.stop - s.start)
    return decoder.CircuitParams(n, 0, True, theta)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rydsim.params import MediumParams


@pytest.fixture
def desk_params():
    """Resonant desk-scale medium: c = 1, z_b = 3, OD_b = 10, OD = 100."""
    return MediumParams(rho=0.05, g=20.0, omega=2.0, delta=0.0, gamma=6.0,
                        c6=486.0, length=30.0, wavenumber=8.0, c=1.0)


@pytest.fixture
def dispersive_params():
    """Far-detuned attractive-kernel medium (c6 < 0, delta > 0)."""
    return MediumParams(rho=0.05, g=20.0, omega=2.0, delta=12.0, gamma=6.0,
                        c6=-3000.0, length=30.0, wavenumber=8.0, c=1.0)

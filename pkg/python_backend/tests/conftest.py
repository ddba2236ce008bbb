import numpy as np
import pytest

from app.models.profile import ProfileParams
from app.services.data import GaussianPolyDatum, InitialDatum, load_datum


@pytest.fixture(scope="session")
def gaussian_odd() -> InitialDatum:
    return load_datum("gaussian-odd")


@pytest.fixture(scope="session")
def gaussian_skew() -> InitialDatum:
    return load_datum("gaussian-skew")


@pytest.fixture(scope="session")
def compact() -> InitialDatum:
    return load_datum("compact")


@pytest.fixture
def params() -> ProfileParams:
    return ProfileParams(beta3=1.0)


@pytest.fixture
def flat_datum() -> InitialDatum:
    """ů ≡ 0.3；沒有激波，只能手動組裝"""
    return InitialDatum(
        raw=GaussianPolyDatum("flat", [0.0], offset=0.3),
        x_crit_raw=0.0,
        u_shift=0.0,
        t0=-1.0,
        c_far=0.3,
        L_support=0.0,
        eps0=0.1,
        window_xi=(-0.1, 0.1),
        beta_table={3: 1.0},
    )


@pytest.fixture
def xs() -> np.ndarray:
    return np.linspace(-2.0, 2.0, 41)

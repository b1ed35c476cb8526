import pytest

from mmbands.core import ElasticParams, InertiaParams

# Reference parameter set used throughout the suite (engineering units:
# MPa moduli, mm length, kg/m^3 density, kg/m inertiae).
MU_E_MPA = 200.0
LAMBDA_E_MPA = 400.0
MU_C_MPA = 1000.0
MU_MICRO_MPA = 100.0
LAMBDA_MICRO_MPA = 100.0
L_C_MM = 1.0
RHO = 2000.0
ETA = 1.0e-2
ETA_BAR = 1.0e-1


@pytest.fixture(scope="session")
def ref_elastic() -> ElasticParams:
    return ElasticParams.from_engineering(
        MU_E_MPA, LAMBDA_E_MPA, MU_C_MPA,
        MU_MICRO_MPA, LAMBDA_MICRO_MPA, L_C_MM)


@pytest.fixture(scope="session")
def inertia_off() -> InertiaParams:
    """Reference inertiae with the gradient terms switched off."""
    return InertiaParams(rho=RHO, eta=ETA)


@pytest.fixture(scope="session")
def inertia_on() -> InertiaParams:
    """Reference inertiae with all three gradient terms switched on."""
    return InertiaParams(rho=RHO, eta=ETA).with_eta_bar(ETA_BAR)

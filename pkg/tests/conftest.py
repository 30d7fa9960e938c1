import pathlib

import pytest

from bushingdx.fuzzify import GasReading
from bushingdx.membership import GasId

DATA_DIR = pathlib.Path(__file__).parent / "data"

# Published reference bushing (#200323106) and its 30 expected degrees:
# per gas (normal, elevated, dangerous).
REFERENCE_READING = dict(
    bushing_id="200323106",
    h2=5782.0,
    ch4=240.0,
    c2h6=22.0,
    c2h4=2.0,
    c2h2=0.0,
    co=44.0,
    co2=72.0,
    n2=4.58,
    o2=0.2535,
)
REFERENCE_TDCG = 6090.0
REFERENCE_DEGREES = {
    GasId.ACETYLENE: (1.0, 0.0, 0.0),
    GasId.CARBON_DIOXIDE: (1.0, 0.0, 0.0),
    GasId.CARBON_MONOXIDE: (1.0, 0.0, 0.0),
    GasId.ETHANE: (0.0, 1.0, 0.0),
    GasId.ETHYLENE: (1.0, 0.0, 0.0),
    GasId.HYDROGEN: (0.0, 0.0, 1.0),
    GasId.METHANE: (0.0, 0.0, 1.0),
    GasId.NITROGEN: (0.0, 1.0, 0.0),
    GasId.OXYGEN: (0.0, 0.0, 1.0),
    GasId.TDCG: (0.0, 0.0, 1.0),
}
REFERENCE_RANK = 155.0 / 3.0  # (5 + 60 + 90) / 3


@pytest.fixture
def reference_reading() -> GasReading:
    return GasReading(**REFERENCE_READING)


@pytest.fixture
def zero_reading() -> GasReading:
    return GasReading(bushing_id="zero", h2=0, ch4=0, c2h6=0, c2h4=0, c2h2=0, co=0, co2=0, n2=0, o2=0)


@pytest.fixture(scope="session")
def fixture_csv_path() -> pathlib.Path:
    return DATA_DIR / "bushings10.csv"


@pytest.fixture(scope="session")
def fixture_csv_text(fixture_csv_path) -> str:
    return fixture_csv_path.read_text(encoding="utf-8")

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def ed_reference():
    from qet_repeater.exact_diag import read_fixture

    return read_fixture(FIXTURES / "ed_reference.csv")

import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from glottisim import GlottalCircuit, simulate

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def loud_waveform():
    """Default one-second run at the loud end of normal voice (10 cmH2O)."""
    return simulate(GlottalCircuit.normal_voice(10.0), 1.0, 44100)


@pytest.fixture(scope="session")
def soft_waveform():
    """Same circuit driven at the soft end of normal voice (7 cmH2O)."""
    return simulate(GlottalCircuit.normal_voice(7.0), 1.0, 44100)

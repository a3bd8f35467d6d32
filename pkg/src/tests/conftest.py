import pytest

from kl_unit_test import UT

# ------------------------------------------------------------------------

@pytest.fixture
def ut():
    return UT()

@pytest.fixture
def threads_env( monkeypatch ):
    def setter( value ):
        if value is None:
            monkeypatch.delenv( 'KOUTLAB_THREADS', raising=False )
        else:
            monkeypatch.setenv( 'KOUTLAB_THREADS', str( value ))
    return setter

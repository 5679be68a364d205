import socket

import numpy as np
import pytest

from tsllm.harness.ingest import load_bundled


def pytest_configure(config):
    config.addinivalue_line("markers", "network: test talks to a local HTTP server")


class NetworkBlocked(RuntimeError):
    pass


@pytest.fixture(autouse=True)
def no_network(request, monkeypatch):
    """Fail any outbound connection unless the test is marked ``network``."""
    if request.node.get_closest_marker("network"):
        yield
        return

    def refuse(*args, **kwargs):
        raise NetworkBlocked("network access attempted in an offline test")

    monkeypatch.setattr(socket.socket, "connect", refuse)
    monkeypatch.setattr(socket, "create_connection", refuse)
    yield


@pytest.fixture(scope="session")
def air():
    return load_bundled("AirPassengersDataset")[0]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

"""Shared test plumbing.

Every test runs with outbound sockets disabled so an accidental live
upstream call fails loudly; tests that deliberately talk to a local
server opt out with @pytest.mark.allow_network.
"""

import socket

import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "allow_network: let this test open sockets (local servers only)"
    )


@pytest.fixture(autouse=True)
def no_network(request, monkeypatch):
    if request.node.get_closest_marker("allow_network"):
        yield
        return

    def blocked(self, *args, **kwargs):
        raise RuntimeError("test attempted network access")

    monkeypatch.setattr(socket.socket, "connect", blocked)
    monkeypatch.setattr(socket.socket, "connect_ex", blocked)
    yield

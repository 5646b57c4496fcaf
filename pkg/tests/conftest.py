"""Shared builders re-exported from the package's abstract-space module."""

import pytest

from latticebv.abstractspace import (  # noqa: F401
    abstract_space,
    random_element,
    random_pairing,
    random_word,
)


@pytest.fixture(scope="session")
def abstract():
    gens, dmap = abstract_space()
    return gens, dmap

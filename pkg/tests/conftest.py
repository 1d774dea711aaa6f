import pathlib

import pytest

from cnlasp.grammar import Grammar
from cnlasp.lexicon import default_lexicon
from cnlasp.service import Pipeline

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def grammar(lexicon):
    return Grammar(lexicon)


@pytest.fixture(scope="session")
def pipeline():
    return Pipeline()


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")

from __future__ import annotations

import pytest

from pluralsem import lexicon as lexmod


@pytest.fixture(scope="session")
def english():
    lex = lexmod.load_path(lexmod.packaged_lexicon_path("english.lex"))
    assert lexmod.validate(lex) == []
    return lex


@pytest.fixture(scope="session")
def french():
    lex = lexmod.load_path(lexmod.packaged_lexicon_path("french.lex"))
    assert lexmod.validate(lex) == []
    return lex


@pytest.fixture(scope="session")
def japanese():
    lex = lexmod.load_path(lexmod.packaged_lexicon_path("japanese.lex"))
    assert lexmod.validate(lex) == []
    return lex

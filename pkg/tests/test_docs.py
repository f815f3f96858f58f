import re
from pathlib import Path

import pytest

from bfree.specfile import DIRECT_FAMILIES
from bfree.bset import spec_from_document
from bfree.toeplitz import direct_spec_from_document

try:
    import tomllib
except ImportError:
    import tomli as tomllib

DOC = (Path(__file__).parents[1] / "docs" / "spec_grammar.md").read_text()
BLOCKS = re.findall(r"```toml\n(.*?)```", DOC, re.S)


def test_every_family_has_an_example():
    families = {tomllib.loads(b)["family"] for b in BLOCKS}
    assert families == {"explicit", "b1", "b1n", "b2", "not_all_holes", "two_filtrations",
                        "gh_variant", "skeleton"}


@pytest.mark.parametrize("block", BLOCKS)
def test_grammar_examples_load(block):
    doc = tomllib.loads(block)
    if doc["family"] in DIRECT_FAMILIES:
        spec = direct_spec_from_document(doc)
    else:
        spec = spec_from_document(doc)
    assert spec is not None

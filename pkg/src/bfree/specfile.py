"""Loading spec files: a path to a TOML document or the name of a bundled spec."""

from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .bset import SpecError, spec_from_document
from .toeplitz import direct_spec_from_document

DIRECT_FAMILIES = ("gh_variant", "skeleton")


def bundled_names() -> list:
    root = resources.files("bfree") / "specs"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def _bundled_text(name: str) -> str:
    return (resources.files("bfree") / "specs" / f"{name}.toml").read_text()


def load_document(source: str) -> tuple:
    """(parsed document, display name) for a path or a bundled name.

    A path that does not exist falls back to the bundled spec with the same
    stem, so 'examples/b1.toml' and 'b1' both resolve.
    """
    path = Path(source)
    if path.is_file():
        text, name = path.read_text(), path.stem
    else:
        stem = path.name[:-5] if path.name.endswith(".toml") else path.name
        if stem not in bundled_names():
            raise SpecError(f"no spec file {source!r} and no bundled spec named {stem!r} "
                            f"(bundled: {', '.join(bundled_names())})")
        text, name = _bundled_text(stem), stem
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SpecError(f"{source}: {exc}") from exc
    return doc, doc.get("name", name)


def load_spec(source: str):
    """A BSetSpec, or a direct Toeplitz spec for the gh_variant and skeleton families."""
    doc, name = load_document(source)
    if doc.get("family") in DIRECT_FAMILIES:
        return direct_spec_from_document(doc, name)
    return spec_from_document(doc, name)


def is_direct(spec) -> bool:
    return getattr(spec, "kind", None) in DIRECT_FAMILIES

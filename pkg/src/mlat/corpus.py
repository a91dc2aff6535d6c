"""The fixture corpus: algebra (``.mla``) and extension (``.ext``) files in one directory.

Run ``python -m mlat.corpus <dir>`` to regenerate the shipped files.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import groups
from .core import FiniteMla, MlaError, commutator_star_of_group, dump_algebra, from_dict, load_algebra, trivial_star_of_group, validate_axioms
from .isoclinism import CentralExtension, make_extension

DEFAULT_DIR = Path(__file__).with_name("corpus_data")


class CorpusError(MlaError):
    """A corpus file failed to load or validate; the message names the file."""


def default_corpus_dir() -> Path:
    env = os.environ.get("MLAT_CORPUS")
    return Path(env) if env else DEFAULT_DIR


# name -> (group table builder, non-abelian?)
_GROUPS = {
    "c1": (lambda: groups.abelian(), False),
    **{f"c{n}": ((lambda n=n: groups.cyclic(n)), False) for n in range(2, 13)},
    "c16": (lambda: groups.cyclic(16), False),
    "v4": (groups.klein_four, False),
    "c2xc4": (lambda: groups.abelian(2, 4), False),
    "c2xc8": (lambda: groups.abelian(2, 8), False),
    "c4xc4": (lambda: groups.abelian(4, 4), False),
    "c2xc2xc2xc2": (lambda: groups.abelian(2, 2, 2, 2), False),
    "s3": (lambda: groups.symmetric(3), True),
    "d4": (lambda: groups.dihedral(4), True),
    "q8": (groups.quaternion, True),
    "d4xc2": (lambda: groups.group_product(groups.dihedral(4), groups.cyclic(2)), True),
    "d8": (lambda: groups.dihedral(8), True),
    "q16": (lambda: groups.generalized_quaternion(4), True),
}

# file stem -> (algebra stem, kernel, cover_of)
_EXTENSIONS = {
    "c2_over_trivial": ("c2", [0], None),
    "c4_over_c2": ("c4", [0, 2], None),
    "v4_over_factor": ("v4", [0, 2], None),
    "d4_over_center": ("d4", [0, 2], "v4"),
    "q8_over_center": ("q8", [0, 2], "v4"),
    "d4_comm_over_center": ("d4_comm", [0, 2], None),
    "q8_comm_over_center": ("q8_comm", [0, 2], None),
    "d4xc2_over_center": ("d4xc2", [0, 1, 4, 5], None),
}


def build_algebras() -> dict[str, FiniteMla]:
    out = {}
    for stem, (build, nonabelian) in _GROUPS.items():
        mul, names = build()
        out[stem] = trivial_star_of_group(mul, name=stem, names=names)
        if nonabelian:
            G, report = commutator_star_of_group(mul, name=f"{stem}_comm", names=names)
            if not report.valid:  # pragma: no cover - shipped groups all validate
                raise CorpusError(f"{stem}: commutator star invalid: {report.as_dict()}")
            out[f"{stem}_comm"] = G
    return out


def write_corpus(root) -> list[Path]:
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, G in build_algebras().items():
        path = root / f"{stem}.mla"
        path.write_text(dump_algebra(G) + "\n", encoding="utf-8")
        written.append(path)
    for stem, (alg, kernel, cover_of) in _EXTENSIONS.items():
        d = {"algebra": alg, "kernel": kernel}
        if cover_of:
            d["cover_of"] = cover_of
        path = root / f"{stem}.ext"
        path.write_text(json.dumps(d, sort_keys=True) + "\n", encoding="utf-8")
        written.append(path)
    return written


@dataclass
class ExtensionEntry:
    name: str
    extension: CentralExtension
    cover_of: Optional[str] = None


@dataclass
class Corpus:
    root: Path
    algebras: dict[str, FiniteMla] = field(default_factory=dict)
    extensions: dict[str, ExtensionEntry] = field(default_factory=dict)

    @property
    def catalog(self) -> list[tuple[str, Path, str]]:
        out = [(n, self.root / f"{n}.mla", "algebra") for n in self.algebras]
        out += [(n, self.root / f"{n}.ext", "extension") for n in self.extensions]
        return out

    def is_empty(self) -> bool:
        return not self.algebras and not self.extensions


def _load_valid_algebra(path: Path) -> FiniteMla:
    try:
        G = load_algebra(path.read_text(encoding="utf-8"))
    except (MlaError, OSError, UnicodeDecodeError) as exc:
        raise CorpusError(f"{path}: {exc}") from exc
    report = validate_axioms(G)
    if not report.valid:
        raise CorpusError(f"{path}: axioms fail: {report.axioms_failed()}")
    if not G.name:
        G = FiniteMla(G.mul, G.star, name=path.stem, names=G.names)
    return G


def read_extension(path, algebras: Optional[dict[str, FiniteMla]] = None) -> tuple[CentralExtension, Optional[str]]:
    """Load an extension file.  A string ``algebra`` is looked up in ``algebras``
    and then as ``<name>.mla`` next to the file.
    """
    path = Path(path)
    try:
        d = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(d, dict) or "algebra" not in d or "kernel" not in d:
            raise CorpusError(f"{path}: extension needs 'algebra' and 'kernel'")
        ref = d["algebra"]
        if isinstance(ref, str):
            G = (algebras or {}).get(ref)
            if G is None:
                G = _load_valid_algebra(path.with_name(f"{ref}.mla"))
        else:
            G = from_dict(ref)
            if not validate_axioms(G).valid:
                raise CorpusError(f"{path}: inline algebra fails the axioms")
        kernel = d["kernel"]
        if not isinstance(kernel, list) or not all(isinstance(k, int) and 0 <= k < G.order for k in kernel):
            raise CorpusError(f"{path}: kernel must be a list of element ids")
        return make_extension(G, kernel), d.get("cover_of")
    except CorpusError:
        raise
    except (MlaError, OSError, ValueError) as exc:
        raise CorpusError(f"{path}: {exc}") from exc


def load_corpus(root=None) -> Corpus:
    """Load and validate every file; the first bad one raises CorpusError."""
    root = Path(root) if root is not None else default_corpus_dir()
    if not root.is_dir():
        raise CorpusError(f"{root}: not a directory")
    C = Corpus(root)
    for path in sorted(root.glob("*.mla")):
        C.algebras[path.stem] = _load_valid_algebra(path)
    for path in sorted(root.glob("*.ext")):
        ext, cover_of = read_extension(path, C.algebras)
        C.extensions[path.stem] = ExtensionEntry(path.stem, ext, cover_of)
    return C


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else DEFAULT_DIR
    for p in write_corpus(target):
        print(p)

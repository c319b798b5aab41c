"""On-disk catalog of class representatives.

Layout::

    <root>/tiers.txt                     one built tier per line
    <root>/n<dim>/s<size>/<label>.cap    capv1 file
    <root>/n<dim>/s<size>/<label>.meta   key=value lines
    <root>/table1.tsv                    tier T3 only

Tiers: T0 = every class in dimensions 1-3; T1 = dimension 4, sizes 18-20;
T2 = the named 5-dimensional caps; T3 = every two-layer cell between the
dimension-4 classes.  Building a tier builds the tiers below it.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path

from . import capfile
from .canon import canonical_form, symmetry_group
from .caps import CapSet, is_complete, spectrum
from .classify import CapClass, ClassLabel, classify, classify_dim4, grow_classes
from .config import RunConfig
from .gf3 import agl_order

log = logging.getLogger(__name__)

TIERS = ("T0", "T1", "T2", "T3")
META_KEYS = ("label", "internal_id", "size", "dim", "symmetry_order", "complete", "spectrum_digest", "certificate", "pinned", "provenance")

# display labels of the derived 5-dimensional caps, in internal-id order per size
DERIVED_LABELS = {"45": "45-cap", "D686": "D686", "41A": "41A", "41B": "41B", "41C": "41C", "41D": "41D", "41E": "41E"}


class CatalogError(RuntimeError):
    pass


class CorruptFile(CatalogError):
    pass


class StaleMetadata(CatalogError):
    pass


class TierRequired(CatalogError):
    def __init__(self, tier: str):
        super().__init__(f"catalog tier required: {tier}")
        self.tier = tier


def spectrum_digest(S: CapSet) -> str:
    items = sorted(spectrum(S).items())
    return hashlib.sha256(repr(items).encode()).hexdigest()[:16]


def slug(label: str) -> str:
    return label.replace(" ", "-")


@dataclass
class CatalogEntry:
    label: str
    internal_id: str
    rep: CapSet
    symmetry_order: int
    complete: bool
    spectrum_digest: str
    certificate: str
    provenance: str
    pinned: bool = True

    @property
    def size(self) -> int:
        return self.rep.size

    @property
    def dim(self) -> int:
        return self.rep.n

    @classmethod
    def build(cls, label: str, internal_id: str, rep: CapSet, provenance: str, pinned: bool = True) -> "CatalogEntry":
        cf = canonical_form(rep)
        return cls(
            label,
            internal_id,
            cf.canonical,
            symmetry_group(cf.canonical).order,
            is_complete(cf.canonical),
            spectrum_digest(cf.canonical),
            cf.certificate,
            provenance,
            pinned,
        )

    def meta(self) -> dict[str, str]:
        return {
            "label": self.label,
            "internal_id": self.internal_id,
            "size": str(self.size),
            "dim": str(self.dim),
            "symmetry_order": str(self.symmetry_order),
            "complete": str(self.complete).lower(),
            "spectrum_digest": self.spectrum_digest,
            "certificate": self.certificate,
            "pinned": str(self.pinned).lower(),
            "provenance": self.provenance,
        }

    def path(self, root: Path) -> Path:
        return Path(root) / f"n{self.dim}" / f"s{self.size}" / slug(self.label)

    def save(self, root) -> None:
        base = self.path(root)
        base.parent.mkdir(parents=True, exist_ok=True)
        capfile.write(base.with_suffix(".cap"), self.rep, [self.label])
        lines = [f"{k}={v}" for k, v in self.meta().items()]
        base.with_suffix(".meta").write_text("\n".join(lines) + "\n")

    def check(self, deep: bool = True) -> list[tuple[str, str, str]]:
        """Stored fields that disagree with recomputation: (key, stored, recomputed)."""
        S = self.rep
        got = {
            "complete": str(is_complete(S)).lower(),
            "spectrum_digest": spectrum_digest(S),
        }
        if deep:
            cf = canonical_form(S)
            if cf.canonical != S:
                return [("representative", "canonical", "not canonical")]
            got["certificate"] = cf.certificate
            order = symmetry_group(S).order
            got["symmetry_order"] = str(order)
            if agl_order(S.n) % order:
                got["symmetry_order"] += " (does not divide the group order)"
        mine = self.meta()
        return [(k, mine[k], v) for k, v in got.items() if mine[k] != v]


def _parse_meta(path: Path) -> dict[str, str]:
    out = {}
    for no, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CorruptFile(f"{path}: line {no}: expected key=value")
        k, v = line.split("=", 1)
        if k not in META_KEYS:
            raise CorruptFile(f"{path}: line {no}: unknown key {k!r}")
        if k in ("complete", "pinned") and v not in ("true", "false"):
            raise CorruptFile(f"{path}: line {no}: {k} must be true or false, got {v!r}")
        if k in ("size", "dim", "symmetry_order") and not v.isdigit():
            raise CorruptFile(f"{path}: line {no}: {k} must be a nonnegative integer, got {v!r}")
        out[k] = v
    missing = [k for k in META_KEYS if k not in out]
    if missing:
        raise CorruptFile(f"{path}: missing keys {', '.join(missing)}")
    return out


def load_entry(base: Path, deep: bool = True) -> CatalogEntry:
    try:
        S = capfile.read(base.with_suffix(".cap"))
    except capfile.CapFileError as e:
        raise CorruptFile(str(e)) from None
    meta = _parse_meta(base.with_suffix(".meta"))
    try:
        e = CatalogEntry(
            meta["label"],
            meta["internal_id"],
            S,
            int(meta["symmetry_order"]),
            meta["complete"] == "true",
            meta["spectrum_digest"],
            meta["certificate"],
            meta["provenance"],
            meta["pinned"] == "true",
        )
    except ValueError as err:
        raise CorruptFile(f"{base}.meta: {err}") from None
    if int(meta["size"]) != S.size or int(meta["dim"]) != S.n:
        raise StaleMetadata(f"{base}.meta: size/dim {meta['size']}/{meta['dim']}, recomputed {S.size}/{S.n}")
    bad = e.check(deep)
    if bad:
        k, stored, got = bad[0]
        raise StaleMetadata(f"{base}.meta: {k} stored {stored}, recomputed {got}")
    return e


@dataclass
class Catalog:
    root: Path
    entries: list[CatalogEntry] = field(default_factory=list)
    tiers: set[str] = field(default_factory=set)
    table1: dict[tuple[str, str], int] | None = None

    def require(self, tier: str) -> None:
        if tier not in self.tiers:
            raise TierRequired(tier)

    def find(self, name: str) -> CatalogEntry:
        for e in self.entries:
            if name in (e.label, e.internal_id, slug(e.label)):
                return e
        raise KeyError(f"no catalog entry named {name!r}")

    def dim(self, n: int, size: int | None = None) -> list[CatalogEntry]:
        return [e for e in self.entries if e.dim == n and (size is None or e.size == size)]

    def reps(self, n: int) -> dict[str, CapSet]:
        return {e.label: e.rep for e in self.dim(n)}

    def save(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        for e in self.entries:
            e.save(self.root)
        if self.table1 is not None:
            write_table1(self.root / "table1.tsv", self.table1)
        (self.root / "tiers.txt").write_text("".join(t + "\n" for t in sorted(self.tiers)))


def catalog_load(root, deep: bool = True) -> Catalog:
    root = Path(root)
    tiers_file = root / "tiers.txt"
    if not tiers_file.exists():
        raise CatalogError(f"{root}: not a catalog (tiers.txt missing)")
    tiers = set()
    for no, raw in enumerate(tiers_file.read_text().splitlines(), 1):
        t = raw.strip()
        if not t:
            continue
        if t not in TIERS:
            raise CorruptFile(f"{tiers_file}: line {no}: unknown tier {t!r}")
        tiers.add(t)
    cat = Catalog(root, tiers=tiers)
    for cap in sorted(root.glob("n*/s*/*.cap")):
        cat.entries.append(load_entry(cap.with_suffix(""), deep))
    if (root / "table1.tsv").exists():
        cat.table1 = read_table1(root / "table1.tsv")
    return cat


# --------------------------------------------------------------------------
# building


def _entries(classes: list[CapClass], provenance: str) -> list[CatalogEntry]:
    return [CatalogEntry.build(str(c.label), c.label.internal_id, c.rep, provenance, c.label.name is not None) for c in classes]


def _dim4(lower, min_size: int = 18) -> list[CapClass]:
    from .classify import _labelled

    by = classify_dim4(min_size, lower)
    return _labelled(4, [S for caps in by.values() for S in caps])


def catalog_build(root, tier: str = "T1", cfg: RunConfig | None = None) -> Catalog:
    """Build every tier up to ``tier`` and save it under ``root``."""
    from .naming import name_classes, name_dim3
    from .search import ScanTask, scan_pair

    if tier not in TIERS:
        raise ValueError(f"unknown tier {tier!r}")
    cfg = cfg or RunConfig()
    upto = TIERS[: TIERS.index(tier) + 1]
    cat = Catalog(Path(root))

    def cell(A, B):
        from .canon import symmetry_group as sg

        if sg(B).order > sg(A).order:
            A, B = B, A
        return scan_pair(ScanTask(A, B), threads=cfg.threads).max_middle

    lower = grow_classes(3)
    c3 = classify(3, 0, lower)
    c4 = _dim4(lower, 18 if "T1" in upto else 19)
    if "T1" in upto:
        log.info("naming dimension-4 classes")
        name_classes(c3, c4, cell)
    else:
        name_dim3(c3, next(k.rep for k in c4 if k.rep.size == 20), next(k.rep for k in c4 if k.rep.size == 19))
    for n in (1, 2):
        cat.entries += _entries(classify(n, 0), "growth from the empty cap")
    cat.entries += _entries(c3, "growth from the empty cap")
    cat.tiers.add("T0")
    if "T1" in upto:
        cat.entries += _entries(c4, "layered classification from dimension-3 classes")
        cat.tiers.add("T1")
    if "T2" in upto:
        from .derive import TARGETS, derive_representatives

        reps = {str(k.label): k.rep for k in c4}
        derived = derive_representatives(TARGETS, reps)
        counters: dict[int, int] = {}
        for name in TARGETS:
            d = derived[name]
            i = counters.get(d.cap.size, 0)
            counters[d.cap.size] = i + 1
            lab = ClassLabel(5, d.cap.size, i, DERIVED_LABELS[name])
            cat.entries.append(CatalogEntry.build(lab.name, lab.internal_id, d.cap, d.provenance))
        cat.tiers.add("T2")
    if "T3" in upto:
        cat.table1 = table1_cells([(str(k.label), k.rep) for k in c4], "all", cell)
        cat.tiers.add("T3")
    cat.save()
    return cat


# --------------------------------------------------------------------------
# table of two-layer maxima


def table1_order(labels: list[str]) -> list[str]:
    """18-cap names in the traditional order, then the 19- and 20-cap."""
    first = ["990A1", "990A2", "990A3", "990B", "981A", "981B", "981C", "981D", "981E", "981F", "981G", "981H", "981I", "981J", "972A", "963A", "963B", "954A", "882A1", "882A2", "19-cap", "20-cap"]
    known = [x for x in first if x in labels]
    return known + sorted(x for x in labels if x not in first)


def table1_cells(reps: list[tuple[str, CapSet]], cells="all", cell=None) -> dict[tuple[str, str], int]:
    """Cell values keyed ``(row, col)`` with ``row`` at or below ``col`` in the table order."""
    from .search import table_cell

    cell = cell or table_cell
    by = dict(reps)
    order = table1_order(list(by))
    if cells == "all":
        pairs = [(order[j], order[i]) for i in range(len(order)) for j in range(i, len(order))]
    else:
        pairs = []
        for a, b in cells:
            ia, ib = order.index(a), order.index(b)
            pairs.append((a, b) if ia >= ib else (b, a))
    return {(r, c): cell(by[r], by[c]) for r, c in pairs}


def write_table1(path, values: dict[tuple[str, str], int], complete: bool = True) -> None:
    lines = ["row\tcol\tvalue"]
    for (r, c), v in sorted(values.items()):
        lines.append(f"{r}\t{c}\t{v}")
    if not complete:
        lines.append("# incomplete")
    Path(path).write_text("\n".join(lines) + "\n")


def read_table1(path) -> dict[tuple[str, str], int]:
    out = {}
    for no, raw in enumerate(Path(path).read_text().splitlines(), 1):
        if no == 1 or not raw.strip() or raw.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 3:
            raise CorruptFile(f"{path}: line {no}: expected three tab-separated fields")
        try:
            out[(parts[0], parts[1])] = int(parts[2])
        except ValueError:
            raise CorruptFile(f"{path}: line {no}: bad value {parts[2]!r}") from None
    return out

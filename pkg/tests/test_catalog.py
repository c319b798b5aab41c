import shutil

import pytest

from capkit.catalog import (
    Catalog,
    CatalogError,
    CorruptFile,
    StaleMetadata,
    TierRequired,
    catalog_load,
    read_table1,
    write_table1,
)


def test_t0_contents(t0_dir):
    cat = catalog_load(t0_dir)
    assert cat.tiers == {"T0"}
    counts = {s: len(cat.dim(3, s)) for s in (9, 8, 7)}
    assert counts == {9: 1, 8: 3, 7: 2}
    assert cat.find("saddled cube").size == 8
    assert cat.find("n3s9c00").label == "square antiprism plus centre"
    with pytest.raises(TierRequired, match="catalog tier required"):
        cat.require("T1")


def test_round_trip_is_bit_exact(t0_dir, tmp_path):
    cat = catalog_load(t0_dir)
    copy = Catalog(tmp_path / "copy", cat.entries, set(cat.tiers))
    copy.save()
    for f in sorted(t0_dir.rglob("*.*")):
        rel = f.relative_to(t0_dir)
        assert (copy.root / rel).read_bytes() == f.read_bytes()


def test_entries_invariants(catalog):
    for e in catalog.entries:
        assert e.check(deep=True) == []
    assert catalog.tiers == {"T0", "T1", "T2"}
    names = {e.label for e in catalog.dim(5)}
    assert names == {"45-cap", "D686", "41A", "41B", "41C", "41D", "41E"}


def _copy(src, dst):
    shutil.copytree(src, dst)
    return dst


def test_corrupt_cap_file_reports_line(t0_dir, tmp_path):
    root = _copy(t0_dir, tmp_path / "c")
    f = root / "n3" / "s9" / "square-antiprism-plus-centre.cap"
    lines = f.read_text().splitlines()
    lines[3] = "3" + lines[3][1:]
    f.write_text("\n".join(lines) + "\n")
    with pytest.raises(CorruptFile, match="line 4"):
        catalog_load(root)


def test_corrupt_meta_reports_line(t0_dir, tmp_path):
    root = _copy(t0_dir, tmp_path / "c")
    f = root / "n3" / "s8" / "cube.meta"
    f.write_text(f.read_text().replace("complete=", "complete ", 1))
    with pytest.raises(CorruptFile, match=r"line \d+: expected key=value"):
        catalog_load(root)


def test_stale_metadata_reports_recomputed_value(t0_dir, tmp_path):
    root = _copy(t0_dir, tmp_path / "c")
    f = root / "n3" / "s8" / "cube.meta"
    text = f.read_text()
    old = next(l for l in text.splitlines() if l.startswith("symmetry_order="))
    f.write_text(text.replace(old, "symmetry_order=7"))
    with pytest.raises(StaleMetadata, match="symmetry_order stored 7, recomputed " + old.split("=")[1]):
        catalog_load(root)


def test_not_a_catalog(tmp_path):
    with pytest.raises(CatalogError):
        catalog_load(tmp_path)


def test_table_file_round_trip(tmp_path):
    t = read_table1("tests/data/table1_reference.tsv")
    assert len(t) == 253
    write_table1(tmp_path / "t.tsv", t)
    assert read_table1(tmp_path / "t.tsv") == t
    (tmp_path / "bad.tsv").write_text("row\tcol\tvalue\na\tb\n")
    with pytest.raises(CorruptFile, match="line 2"):
        read_table1(tmp_path / "bad.tsv")

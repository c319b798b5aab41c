import shutil


from capkit.capfile import read, write
from capkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out + out.err


def test_classify_dim3(tmp_path, capsys):
    code, out = run(capsys, "classify", "--dim", "3", "--min-size", "7", "--out", str(tmp_path))
    assert code == 0 and "6 classes" in out
    files = sorted(tmp_path.rglob("*.cap"))
    assert [f.parent.name for f in files].count("s8") == 3
    assert all(read(f).n == 3 for f in files)


def test_classify_dim1(tmp_path, capsys):
    code, out = run(capsys, "classify", "--dim", "1", "--min-size", "2", "--out", str(tmp_path))
    assert code == 0 and "1 classes" in out


def test_classify_usage_errors(tmp_path, capsys):
    assert run(capsys, "classify", "--dim", "7", "--out", str(tmp_path))[0] == 2
    assert run(capsys, "classify", "--dim", "4", "--min-size", "10", "--out", str(tmp_path))[0] == 2
    assert run(capsys, "classify", "--dim", "3")[0] == 2


THM1 = ["--forbid", "20,20,6", "--forbid", "20,19,7", "--forbid", "19,19,8", "--forbid", "20,18,8"]
PROP2 = ["--forbid", "20,20,5", "--forbid", "20,19,6", "--forbid", "19,19,7", "--forbid", "20,18,7", "--forbid", "19,18,8"]


def test_diagram_certificate(tmp_path, capsys):
    code, out = run(capsys, "diagram", "--dim", "5", "--size", "46", *THM1, "--line", "10,133,-29190", "--out", str(tmp_path))
    assert code == 0 and "INFEASIBLE" in out
    assert (tmp_path / "diagram_n5_s46.svg").exists()


def test_diagram_uncertified(capsys):
    code, out = run(capsys, "diagram", "--dim", "5", "--size", "45", *PROP2, "--line", "1,13,-2730")
    assert code == 1 and "not certified" in out


def test_diagram_distribution(capsys):
    code, out = run(capsys, "diagram", "--dim", "5", "--size", "45", *PROP2)
    assert code == 0
    assert "1 distribution(s)" in out and "{18,18,9}x55, {15,15,15}x66" in out


def test_diagram_plain(tmp_path, capsys):
    code, _ = run(capsys, "diagram", "--dim", "2", "--size", "4", "--out", str(tmp_path))
    assert code == 0
    assert run(capsys, "diagram", "--dim", "2", "--size", "4", "--forbid", "1,2")[0] == 2


def test_scan_named(catalog_dir, capsys):
    code, out = run(capsys, "scan", "--catalog", str(catalog_dir), "--left", "882A2", "--right", "882A2")
    assert code == 0 and "max_middle 9" in out and "total 45" in out
    code, out = run(capsys, "scan", "--catalog", str(catalog_dir), "--left", "n4s18c12", "--right", "882A1", "--tally", "5")
    assert code == 0 and "tally >= 5: 144" in out


def test_scan_files_and_empty(tmp_path, catalog, capsys):
    write(tmp_path / "a.cap", catalog.find("cube").rep)
    write(tmp_path / "b.cap", catalog.find("square antiprism").rep)
    code, out = run(capsys, "scan", "--left", str(tmp_path / "a.cap"), "--right", str(tmp_path / "b.cap"), "--witnesses", str(tmp_path / "w"))
    assert code == 0 and "max_middle" in out
    assert list((tmp_path / "w").glob("*.cap"))
    code, out = run(capsys, "scan", "--left", "empty", "--right", "empty", "--dim", "4")
    assert code == 0 and "max_middle 9" in out


def test_scan_resume(tmp_path, catalog_dir, capsys):
    log = tmp_path / "scan.log"
    args = ["scan", "--catalog", str(catalog_dir), "--left", "990A1", "--right", "990A1", "--resume", str(log)]
    code, out = run(capsys, *args, "--chunk-limit", "2")
    assert code == 1 and "budget exceeded" in out and log.exists()
    code, out = run(capsys, *args)
    assert code == 0 and "max_middle 5" in out


def test_scan_unknown_class(catalog_dir, capsys):
    assert run(capsys, "scan", "--catalog", str(catalog_dir), "--left", "nope", "--right", "882A1")[0] == 2


def test_verify(catalog_dir, capsys, tmp_path):
    code, out = run(capsys, "verify", "--suite", "45-cap", "--catalog", str(catalog_dir), "--tsv", str(tmp_path / "r.tsv"))
    assert code == 0 and "PASS 45-cap/order" in out and "[720]" in out
    assert (tmp_path / "r.tsv").read_text().count("PASS") >= 8
    code, out = run(capsys, "verify", "--suite", "Δ686", "--catalog", str(catalog_dir))
    assert code == 2


def test_verify_tier_and_corruption(t0_dir, tmp_path, capsys):
    code, out = run(capsys, "verify", "--suite", "structure-lemmas", "--catalog", str(t0_dir))
    assert code == 1 and "catalog tier required: T1" in out
    code, out = run(capsys, "verify", "--suite", "all", "--catalog", str(t0_dir))
    assert code == 0 and "SKIP 45-cap" in out
    bad = tmp_path / "bad"
    shutil.copytree(t0_dir, bad)
    f = bad / "n3" / "s8" / "cube.meta"
    text = f.read_text()
    f.write_text(text.replace("complete=true", "complete=maybe"))
    code, out = run(capsys, "verify", "--suite", "dim3", "--catalog", str(bad))
    assert code == 1 and "FAIL catalog" in out and "complete must be true or false" in out
    f.write_text(text.replace("complete=true", "complete=false"))
    code, out = run(capsys, "verify", "--suite", "dim3", "--catalog", str(bad))
    assert code == 1 and "complete stored false, recomputed true" in out

import pytest

from lattice_tiling.chains import uniform_chain_partition
from lattice_tiling.cli import main
from lattice_tiling.errors import PreconditionError
from lattice_tiling.formats import (
    file_kind,
    parse_elements,
    parse_poset,
    read_chains,
    read_poset,
    read_tiling,
    read_weights,
    write_chains,
    write_poset,
    write_tiling,
    write_weights,
)
from lattice_tiling.grids import tile_rectangle
from lattice_tiling.posets import diamond, is_isomorphic, s2k_poset
from lattice_tiling.weights import one_mod_t_partition


def test_poset_specs():
    assert parse_poset("grid:2x3").dims == (2, 3)
    assert parse_poset("chain:4").size == 4
    assert parse_poset("boolean:3").size == 8
    assert parse_poset("s2k:2").size == s2k_poset(2).size
    assert is_isomorphic(parse_poset("diamond"), diamond())
    for bad in ("grid:0x2", "chain:x", "cube", "grid:"):
        with pytest.raises(PreconditionError):
            parse_poset(bad)


def test_poset_file_round_trip(tmp_path):
    p = s2k_poset(2)
    (tmp_path / "p.poset").write_text(write_poset(p))
    q = parse_poset("@p.poset", base=tmp_path)
    assert is_isomorphic(p, q)
    assert is_isomorphic(read_poset(write_poset(diamond())), diamond())


def test_elements():
    assert parse_elements("(1,2) (3,4)") == [(1, 2), (3, 4)]
    assert parse_elements("0x1f 0x0") == [31, 0]


def test_chain_round_trip():
    cp = uniform_chain_partition(6, 3)
    text = write_chains(cp)
    assert file_kind(text) == "chains"
    back = read_chains(text)
    assert back.chains == cp.chains and back.h == 3


def test_tiling_round_trip():
    t = tile_rectangle(2, 2, 13)
    back = read_tiling(write_tiling(t))
    assert back.tiles == t.tiles and back.host.dims == (4, 13)


def test_weights_round_trip():
    _, w = one_mod_t_partition(diamond(), 2)
    back, t, kind = read_weights(write_weights(w, 2, "one-mod-t"))
    assert (t, kind) == (2, "one-mod-t") and back.entries == w.entries


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_tile_rect_and_verify(tmp_path, capsys):
    out = tmp_path / "r.tiling"
    svg = tmp_path / "r.svg"
    code, _, _ = run(capsys, "tile-rect", "--a", "2", "--b", "2", "--c", "13", "--out", str(out), "--svg", str(svg))
    assert code == 0 and "<svg " in svg.read_text()
    code, text, _ = run(capsys, "verify", str(out))
    assert code == 0 and text.startswith("verdict PASS")


def test_cli_verify_detects_corruption(tmp_path, capsys):
    out = tmp_path / "r.tiling"
    run(capsys, "tile-rect", "--a", "2", "--b", "2", "--c", "13", "--out", str(out))
    lines = out.read_text().splitlines()
    out.write_text("\n".join(lines[:-1]) + "\n")
    code, text, _ = run(capsys, "verify", str(out))
    assert code == 1 and "violation coverage" in text


def test_cli_exit_codes(capsys):
    assert run(capsys, "tile-rect", "--a", "3", "--b", "2", "--c", "30")[0] == 2
    code, _, err = run(capsys, "tile-grid", "--dims", "12x12", "--target", "grid:2x2", "--mode", "strict")
    assert code == 1 and err.startswith("error: divisibility")
    code, _, err = run(capsys, "chain-partition", "--n", "9", "--h", "8")
    assert code == 1 and err.startswith("error: infeasible: width")
    assert run(capsys, "almost-partition", "--n", "60", "--target", "grid:2x2")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["tile-rect", "--a", "2"])
    assert exc.value.code == 2
    assert run(capsys, "verify", "/nonexistent/file")[0] == 2


def test_cli_weak_partition(tmp_path, capsys):
    out = tmp_path / "w.weights"
    assert run(capsys, "weak-partition", "--target", "diamond", "--t", "3", "--out", str(out))[0] == 0
    code, text, _ = run(capsys, "verify", str(out))
    assert code == 0 and text.startswith("verdict PASS")
    assert run(capsys, "weak-partition", "--target", "chain:3", "--t", "2", "--kind", "t", "--m", "2")[0] == 1


def test_cli_almost_partition_explicit_and_implicit(tmp_path, capsys):
    out = tmp_path / "a.almost"
    code, text, _ = run(capsys, "almost-partition", "--n", "9", "--target", "chain:3", "--out", str(out))
    assert code == 0 and "leftover 2" in text
    assert run(capsys, "verify", str(out))[0] == 0
    imp = tmp_path / "b.almost"
    code, text, _ = run(
        capsys, "almost-partition", "--n", "32", "--target", "grid:2x2", "--implicit", "--samples", "500", "--out", str(imp)
    )
    assert code == 0 and (tmp_path / "b.almost.factor1.chains").exists()
    code, text, _ = run(capsys, "verify", str(imp), "--samples", "500")
    assert code == 0, text


def test_cli_bounds(capsys):
    code, text, _ = run(capsys, "bounds", "--target", "grid:2x2")
    assert code == 0 and "grid_leftover 147456" in text


def test_cli_output_is_deterministic(tmp_path, capsys):
    (tmp_path / "x").mkdir()
    (tmp_path / "y").mkdir()
    a, b = tmp_path / "x" / "out", tmp_path / "y" / "out"
    for p in (a, b):
        run(capsys, "chain-partition", "--n", "10", "--h", "4", "--out", str(p))
    assert a.read_bytes() == b.read_bytes()
    for p in (a, b):
        run(capsys, "almost-partition", "--n", "9", "--target", "chain:4", "--out", str(p))
    assert a.read_bytes() == b.read_bytes()

import json

from hyperconn.cli import main
from hyperconn.hypergraph import read_edge_list


def test_gen_and_connectivity(tmp_path, capsys):
    g = tmp_path / "g.txt"
    assert main(["gen", "--n", "12", "--d", "3", "--m", "40", "--seed", "2", "--out", str(g)]) == 0
    assert read_edge_list(g).m == 40
    assert main(["connectivity", str(g), "--k", "2", "--kappa"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["m"] == 40 and isinstance(report["k_connected"], bool)
    assert report["vertex_connectivity"] >= 0


def test_gen_gnp_stdout(capsys):
    assert main(["gen", "--n", "10", "--model", "gnp", "--p", "0.5", "--seed", "1"]) == 0
    assert capsys.readouterr().out.startswith("10 3 ")


def test_experiments(tmp_path, capsys):
    out = tmp_path / "s.csv"
    rc = main(["sweep", "--n", "40", "--trials", "3", "--c-min", "-1", "--c-max", "1",
               "--c-steps", "3", "--out", str(out)])
    assert rc == 0
    assert len(out.read_text().splitlines()) == 4
    for cmd in ("hitting-times", "poisson", "quasi", "property-q"):
        assert main([cmd, "--n", "25", "--trials", "2", "--seed", "3"]) == 0
    capsys.readouterr()


def test_config_file_and_override(tmp_path, capsys):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"kind": "hitting-times", "n": 15, "trials": 2}))
    assert main(["hitting-times", "--config", str(conf), "--trials", "3", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["config"]["n"] == 15 and data["config"]["trials"] == 3


def test_exit_codes(tmp_path, capsys):
    assert main(["sweep", "--n", "10", "--trials", "0"]) == 1
    assert main(["property-q", "--n", "600", "--trials", "1"]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("4 3 1\n1 2 9\n")
    assert main(["connectivity", str(bad)]) == 1
    assert main(["sweep", "--n", "40", "--c-min", "0"]) == 1
    try:
        main(["nonsense"])
    except SystemExit as exc:
        assert exc.code == 1
    capsys.readouterr()

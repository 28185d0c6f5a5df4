"""Builtin families, catalog files, reports, and the command surface."""

import json
from pathlib import Path

import pytest

from grouplab.catalog import (
    InvariantReport,
    PipelineConfig,
    builtin,
    compute_report,
    group_from_spec_dict,
    load_catalog,
    save_catalog,
    shipped_corpus,
    write_corpus_catalog,
)
from grouplab.cli import main, resolve_group
from grouplab.errors import ParamOutOfRange, ParseError, UnknownFamily, ValidationError
from grouplab.groups import center, derived_subgroup

REPO_CATALOG = Path(__file__).resolve().parent.parent / "catalog"


class TestBuiltins:
    def test_cyclic(self):
        G = builtin("cyclic", (6,))
        assert G.order == 6 and G.is_abelian()

    def test_quaternion8(self):
        Q8 = builtin("quaternion8")
        assert Q8.order == 8
        assert len(center(Q8)) == 2
        assert len(derived_subgroup(Q8)) == 2

    def test_dihedral_vs_dicyclic(self):
        assert builtin("dihedral", (6,)).order == 12
        assert builtin("dicyclic", (3,)).order == 12

    def test_symmetric_alternating(self):
        assert builtin("symmetric", (4,)).order == 24
        assert builtin("alternating", (4,)).order == 12
        assert builtin("alternating", (5,)).order == 60

    def test_elementary(self):
        G = builtin("elementary", (3, 2))
        assert G.order == 9 and G.is_abelian()
        with pytest.raises(ParamOutOfRange):
            builtin("elementary", (4, 2))

    def test_extraspecial_pair(self):
        a = builtin("extraspecial", (3, "p"))
        b = builtin("extraspecial", (3, "p2"))
        assert a.order == b.order == 27
        assert len(center(a)) == len(center(b)) == 3
        assert max(a.order_multiset()) == 3
        assert max(b.order_multiset()) == 9

    def test_direct_product_descriptor(self):
        G = builtin("direct_product", (("cyclic", 2), ("symmetric", 3)))
        assert G.order == 12

    def test_unknown_family(self):
        with pytest.raises(UnknownFamily):
            builtin("sporadic", (1,))

    def test_param_out_of_range(self):
        with pytest.raises(ParamOutOfRange):
            builtin("symmetric", (6,))


class TestCatalogFiles:
    def test_load_shipped_catalog(self):
        groups = load_catalog(REPO_CATALOG)
        assert len(groups) == 35
        assert [g.label for g in groups] == sorted(g.label for g in groups)

    def test_round_trip(self, tmp_path):
        groups = [builtin("cyclic", (2,)), builtin("symmetric", (3,))]
        groups = [g for g in groups]
        names = ["c2", "s3"]
        import dataclasses

        groups = [dataclasses.replace(g, label=n) for g, n in zip(groups, names)]
        save_catalog(groups, tmp_path)
        back = load_catalog(tmp_path)
        assert [g.label for g in back] == sorted(names)
        for g in back:
            orig = groups[names.index(g.label)]
            assert g.mul == orig.mul

    def test_bad_table_rejected(self, tmp_path):
        (tmp_path / "bad.json").write_text(
            json.dumps({"name": "bad", "kind": "cayley", "data": {"table": [[0, 1], [1, 1]]}})
        )
        with pytest.raises(ValidationError):
            load_catalog(tmp_path)

    def test_parse_error_carries_position(self, tmp_path):
        (tmp_path / "broken.json").write_text("{not json")
        with pytest.raises(ParseError) as err:
            load_catalog(tmp_path)
        assert "broken.json" in str(err.value)

    def test_duplicate_names_rejected(self, tmp_path):
        doc = {"name": "same", "kind": "builtin", "data": {"family": "cyclic", "params": [2]}}
        (tmp_path / "a.json").write_text(json.dumps(doc))
        (tmp_path / "b.json").write_text(json.dumps(doc))
        with pytest.raises(ValidationError):
            load_catalog(tmp_path)

    def test_perm_kind(self):
        doc = {
            "name": "s3perm",
            "kind": "perm",
            "data": {"generators": [[1, 0, 2], [2, 1, 0]]},
        }
        G = group_from_spec_dict(doc)
        assert G.order == 6 and G.label == "s3perm"

    def test_corpus_catalog_matches_shipped(self, tmp_path):
        write_corpus_catalog(tmp_path)
        disk = load_catalog(tmp_path)
        mem = shipped_corpus()
        assert [g.label for g in disk] == [g.label for g in mem]
        assert all(a.mul == b.mul for a, b in zip(disk, mem))


class TestReports:
    def test_s3_report(self):
        rep = compute_report(builtin("symmetric", (3,)), PipelineConfig(oracle=True))
        doc = rep.to_json_dict()
        assert doc["curly_order"] == 3
        assert doc["kernel_invariants"] == []
        assert doc["exterior"]["multiplier_order"] == 1
        assert doc["oracle"]["multiplier_agrees"] is True
        assert doc["oracle"]["b0_le_kernel"] is True
        assert doc["timing_ms"] is None

    def test_round_trip(self):
        rep = compute_report(builtin("cyclic", (6,)))
        doc = rep.to_json_dict()
        back = InvariantReport.from_json_dict(json.loads(json.dumps(doc)))
        assert back.to_json_dict() == doc

    def test_consistency_enforced(self):
        rep = compute_report(builtin("symmetric", (3,)))
        rep.kernel_order = 5
        with pytest.raises(Exception):
            rep.to_json_dict()


class TestCli:
    def test_compute_builtin(self, tmp_path, capsys):
        rc = main(["compute", "builtin:symmetric:3", "--out", str(tmp_path)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "pairing_order=3" in out
        assert (tmp_path / "symmetric_3.json").is_file()

    def test_compute_abelian(self, tmp_path):
        rc = main(["compute", "builtin:cyclic:12", "--out", str(tmp_path)])
        assert rc == 0
        doc = json.loads((tmp_path / "cyclic_12.json").read_text())
        assert doc["curly_order"] == 1 and doc["kernel_invariants"] == []

    def test_forced_cap_exit_code(self, tmp_path):
        rc = main(["compute", "builtin:symmetric:3", "--max-cosets", "10", "--out", str(tmp_path)])
        assert rc == 2

    def test_input_error_exit_code(self, tmp_path):
        rc = main(["compute", "builtin:sporadic:1", "--out", str(tmp_path)])
        assert rc == 1

    def test_env_var_cap(self, tmp_path, monkeypatch):
        monkeypatch.setenv("GROUPLAB_MAX_COSETS", "10")
        rc = main(["compute", "builtin:symmetric:3", "--out", str(tmp_path)])
        assert rc == 2

    def test_catalog_compute_with_jobs(self, tmp_path):
        cat = tmp_path / "cat"
        cat.mkdir()
        for name, fam, params in (("a_s3", "symmetric", [3]), ("b_d4", "dihedral", [4]), ("c_z6", "cyclic", [6])):
            (cat / f"{name}.json").write_text(
                json.dumps({"name": name, "kind": "builtin", "data": {"family": fam, "params": params}})
            )
        out1 = tmp_path / "r1"
        out2 = tmp_path / "r2"
        assert main(["compute", str(cat), "--out", str(out1), "--jobs", "1"]) == 0
        assert main(["compute", str(cat), "--out", str(out2), "--jobs", "2"]) == 0
        for f in sorted(out1.glob("*.json")):
            assert f.read_bytes() == (out2 / f.name).read_bytes()

    def test_families_command(self, tmp_path):
        cat = tmp_path / "cat"
        cat.mkdir()
        for name, fam, params in (("d4", "dihedral", [4]), ("q8", "quaternion8", []), ("z8", "cyclic", [8])):
            (cat / f"{name}.json").write_text(
                json.dumps({"name": name, "kind": "builtin", "data": {"family": fam, "params": params}})
            )
        rc = main(["families", str(cat), "--out", str(tmp_path / "fam")])
        assert rc == 0
        doc = json.loads((tmp_path / "fam" / "families.json").read_text())
        members = [f["members"] for f in doc["families"]]
        assert ["d4", "q8"] in members and ["z8"] in members

    def test_verify_theorem_command_small(self, tmp_path):
        cat = tmp_path / "cat"
        cat.mkdir()
        members = (
            ("d4", "dihedral", [4]),
            ("q8", "quaternion8", []),
            ("s3", "symmetric", [3]),
            ("s3xz2", "direct_product", [["symmetric", 3], ["cyclic", 2]]),
            ("v4", "elementary", [2, 2]),
            ("z4", "cyclic", [4]),
        )
        for name, fam, params in members:
            (cat / f"{name}.json").write_text(
                json.dumps({"name": name, "kind": "builtin", "data": {"family": fam, "params": params}})
            )
        rc = main(["verify-theorem", str(cat), "--out", str(tmp_path / "vt")])
        assert rc == 0
        doc = json.loads((tmp_path / "vt" / "verify_theorem.json").read_text())
        assert doc["all_pass"] is True
        fams = sorted(f["members"] for f in doc["families"])
        assert fams == [["d4", "q8"], ["s3", "s3xz2"], ["v4", "z4"]]
        assert (tmp_path / "vt" / "witnesses" / "d4__q8.json").is_file()

    def test_verify_theorem_single_group(self, tmp_path):
        cat = tmp_path / "cat"
        cat.mkdir()
        (cat / "s3.json").write_text(
            json.dumps({"name": "s3", "kind": "builtin", "data": {"family": "symmetric", "params": [3]}})
        )
        rc = main(["verify-theorem", str(cat), "--out", str(tmp_path / "vt")])
        assert rc == 0
        doc = json.loads((tmp_path / "vt" / "verify_theorem.json").read_text())
        assert doc["all_pass"] is True and doc["pairs"] == []

    def test_oracle_command_small(self, tmp_path):
        cat = tmp_path / "cat"
        cat.mkdir()
        for name, fam, params in (("s3", "symmetric", [3]), ("v4", "elementary", [2, 2]), ("big", "extraspecial", [3, "p"])):
            (cat / f"{name}.json").write_text(
                json.dumps({"name": name, "kind": "builtin", "data": {"family": fam, "params": params}})
            )
        rc = main(["oracle", str(cat), "--out", str(tmp_path / "orc")])
        assert rc == 0
        doc = json.loads((tmp_path / "orc" / "oracle.json").read_text())
        by_name = {e["group"]: e for e in doc["entries"]}
        assert by_name["s3"]["multiplier_agrees"] is True
        assert by_name["v4"]["multiplier_order_wedge"] == 2
        assert "skipped" in by_name["big"]

    def test_dump_presentation(self, capsys):
        rc = main(["dump-presentation", "builtin:cyclic:2", "--variant", "curly"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["num_generators"] == 4
        assert doc["raw_relator_counts"]["collapsing"] == 4

    def test_dump_cocycles(self, capsys):
        rc = main(["dump-cocycles", "builtin:elementary:2:2", "--modulus", "4"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["h2_order"] == 8

    def test_resolve_group_rejects_garbage(self):
        with pytest.raises(ValidationError):
            resolve_group("nonsense")

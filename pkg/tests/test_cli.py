import csv
import dataclasses
from pathlib import Path

import pytest

from morphwheel import ConfigError, serialize
from morphwheel.cli import Objective, SweepSpec, main, set_field
from morphwheel.params import reference_design
from morphwheel.report import consistency_warnings, design_card

REFERENCE_CONFIG = str(Path(__file__).resolve().parent.parent / "configs" / "reference.yaml")


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "design.yaml"
    path.write_text(serialize(reference_design()), encoding="utf-8")
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestConsistencyWarnings:
    def test_reference_flags_the_known_discrepancies(self, reference):
        codes = {w.code for w in consistency_warnings(reference)}
        assert "reduced_length_mismatch" in codes
        assert "chassis_diameter_mismatch" in codes
        assert "reported_length_identity" in codes
        assert "rod_half_expansion_mismatch" in codes
        # elongated and wheel diameter close exactly, so no warning for them
        assert "elongated_length_mismatch" not in codes
        assert "wheel_diameter_mismatch" not in codes

    def test_silent_without_reported_values(self, reference):
        import morphwheel.params as params
        bare = dataclasses.replace(reference, reported=params.ReportedTargets())
        assert consistency_warnings(bare) == ()


class TestDesignCard:
    def test_reference_card_targets(self, reference):
        card = design_card(reference)
        out = card.outputs
        assert out["elongated_length_mm"] == 340.0
        assert out["wheel_diameter_mm"] == pytest.approx(400.0)
        assert out["target_elongated_ok"] is True
        assert out["target_wheel_diameter_ok"] is True
        assert out["target_reduced_ok"] is False
        assert out["reduction_ok"] is False
        assert out["motor_check_ok"] is True
        assert out["curved_rod_levels"] == 2

    def test_loose_target_ratio_passes(self, reference):
        card = design_card(reference, target_ratio=0.9)
        assert card.outputs["reduction_ok"] is True

    def test_infeasible_wheel_geometry_is_flagged_not_fatal(self, reference):
        p = dataclasses.replace(
            reference,
            wheel=dataclasses.replace(reference.wheel, min_half_separation=150.0))
        card = design_card(p)
        assert "INFEASIBLE" in card.outputs["wheel_geometry"]
        assert "elongated_length_mm" in card.outputs  # rest of the card intact

    def test_card_is_deterministic(self, reference):
        a, b = design_card(reference), design_card(reference)
        assert a.digest == b.digest
        assert a.outputs == b.outputs
        assert a.warnings == b.warnings


class TestSetField:
    def test_replaces_nested_field(self, reference):
        p = set_field(reference, "wheel.hub_offset", 70.0)
        assert p.wheel.hub_offset == 70.0
        assert reference.wheel.hub_offset == 60.0  # original untouched

    def test_replaces_top_level_field(self, reference):
        assert set_field(reference, "screw_lead", 4.0).screw_lead == 4.0

    def test_integer_fields_stay_integers(self, reference):
        p = set_field(reference, "screw.n_levels", 6.0)
        assert p.screw.n_levels == 6
        assert isinstance(p.screw.n_levels, int)

    def test_unresolvable_path_named(self, reference):
        with pytest.raises(ConfigError, match="wheel.bogus"):
            set_field(reference, "wheel.bogus", 1.0)

    def test_non_numeric_leaf_rejected(self, reference):
        with pytest.raises(ConfigError, match="numeric"):
            set_field(reference, "screw", 1.0)


class TestSweepSpec:
    def test_invariants(self):
        with pytest.raises(ValueError):
            SweepSpec("a", 1.0, 2.0, 1, Objective.MIN_PEAK_TORQUE)
        with pytest.raises(ValueError):
            SweepSpec("a", 2.0, 2.0, 5, Objective.MIN_PEAK_TORQUE)

    def test_grid_endpoints(self):
        spec = SweepSpec("a", 20.0, 50.0, 4, Objective.MIN_REDUCED_LENGTH)
        grid = spec.grid()
        assert grid[0] == 20.0 and grid[-1] == 50.0 and len(grid) == 4


class TestCmdValidate:
    def test_reference_config_is_valid_with_warnings(self, capsys):
        assert main(["validate", "--config", REFERENCE_CONFIG]) == 0
        out = capsys.readouterr().out
        assert "validation: OK" in out
        assert "reduced_length_mismatch" in out
        assert "chassis_diameter_mismatch" in out

    def test_missing_section_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.yaml"
        bad.write_text("layout:\n  joint_arm_height: 5.0\n")
        assert main(["validate", "--config", str(bad)]) == 2
        assert "screw" in capsys.readouterr().err

    def test_empty_file_exits_2(self, tmp_path):
        empty = tmp_path / "empty.yaml"
        empty.write_text("")
        assert main(["validate", "--config", str(empty)]) == 2

    def test_unreadable_file_exits_2(self, tmp_path):
        assert main(["validate", "--config", str(tmp_path / "missing.yaml")]) == 2

    def test_invalid_design_exits_1(self, tmp_path, capsys):
        text = serialize(reference_design()).replace(
            "rod_half_length: 140.0", "rod_half_length: -140.0")
        bad = tmp_path / "invalid.yaml"
        bad.write_text(text)
        assert main(["validate", "--config", str(bad)]) == 1
        assert "VIOLATION wheel.rod_half_length" in capsys.readouterr().out


class TestCmdReport:
    def test_reference_card_text(self, config_file, capsys):
        assert main(["report", "--config", config_file]) == 0
        out = capsys.readouterr().out
        assert "elongated_length_mm = 340" in out
        assert "wheel_diameter_mm = 400" in out
        assert "target_elongated_ok = PASS" in out
        assert "target_wheel_diameter_ok = PASS" in out
        assert "target_reduced_ok = FAIL" in out
        assert "motor_check_ok = PASS" in out

    def test_loose_ratio_flag(self, config_file, capsys):
        assert main(["report", "--config", config_file, "--target-ratio", "0.9"]) == 0
        assert "reduction_ok = PASS" in capsys.readouterr().out

    def test_infeasible_geometry_surfaced(self, tmp_path, capsys):
        text = serialize(reference_design()).replace(
            "min_half_separation: 0.0", "min_half_separation: 150.0")
        path = tmp_path / "inf.yaml"
        path.write_text(text)
        assert main(["report", "--config", str(path)]) == 0
        assert "INFEASIBLE" in capsys.readouterr().out

    def test_invalid_design_refused(self, tmp_path):
        text = serialize(reference_design()).replace(
            "n_levels: 4", "n_levels: 0")
        path = tmp_path / "bad.yaml"
        path.write_text(text)
        assert main(["report", "--config", str(path)]) == 1


class TestCmdProfile:
    def test_two_steps_two_rows(self, config_file, tmp_path):
        out = tmp_path / "p.csv"
        assert main(["profile", "--config", config_file, "--steps", "2",
                     "--out", str(out)]) == 0
        rows = read_csv(out)
        assert len(rows) == 2
        assert float(rows[0]["module_length_mm"]) == 340.0
        assert float(rows[0]["wheel_radius_mm"]) == 60.0
        assert rows[0]["trigger_mode"] == "telescopic"
        assert float(rows[1]["wheel_radius_mm"]) == 200.0
        assert rows[1]["trigger_mode"] == "rigid"

    def test_hundred_steps_monotone_and_reaches_target(self, config_file, tmp_path):
        out = tmp_path / "p.csv"
        assert main(["profile", "--config", config_file, "--steps", "100",
                     "--out", str(out)]) == 0
        rows = read_csv(out)
        assert len(rows) == 100
        lengths = [float(r["module_length_mm"]) for r in rows]
        radii = [float(r["wheel_radius_mm"]) for r in rows]
        assert all(a > b for a, b in zip(lengths, lengths[1:]))
        assert all(a < b for a, b in zip(radii, radii[1:]))
        assert radii[-1] == 200.0

    def test_rerun_is_byte_identical(self, config_file, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (out1, out2):
            assert main(["profile", "--config", config_file, "--steps", "20",
                         "--out", str(out)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        kf1 = tmp_path / "a_keyframes.json"
        kf2 = tmp_path / "b_keyframes.json"
        assert kf1.read_bytes() == kf2.read_bytes()

    def test_unwritable_path_exits_2(self, config_file, tmp_path):
        assert main(["profile", "--config", config_file, "--steps", "5",
                     "--out", str(tmp_path / "nodir" / "p.csv")]) == 2

    def test_force_table_override_changes_forces(self, config_file, tmp_path):
        table = tmp_path / "table.yaml"
        table.write_text("- [1.0, 6.8]\n- [8.0, 0.2]\n")
        out = tmp_path / "p.csv"
        assert main(["profile", "--config", config_file, "--steps", "3",
                     "--out", str(out), "--force-table", str(table)]) == 0
        rows = read_csv(out)
        assert float(rows[0]["axial_force_N"]) == 6.8

    def test_bad_force_table_exits_2(self, config_file, tmp_path):
        table = tmp_path / "table.yaml"
        table.write_text("- [2.0, 1.0]\n- [1.0, 3.0]\n")
        assert main(["profile", "--config", config_file, "--steps", "3",
                     "--out", str(tmp_path / "p.csv"),
                     "--force-table", str(table)]) == 2


class TestCmdSweep:
    def test_screw_length_sweep_monotone_argmin_at_boundary(self, config_file,
                                                            tmp_path, capsys):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--config", config_file,
                     "--sweep-param", "screw.screw_level_length",
                     "--sweep-range", "20:50:7",
                     "--objective", "min-reduced-length",
                     "--out", str(out)]) == 0
        rows = read_csv(out)
        assert len(rows) == 7
        objectives = [float(r["objective"]) for r in rows]
        # reduced length = 2*S_L + K grows with S_L, so the minimum sits at 20
        assert objectives == sorted(objectives)
        assert objectives[0] == pytest.approx(220.0)
        assert "argmin" in capsys.readouterr().out

    def test_two_grid_points(self, config_file, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--config", config_file,
                     "--sweep-param", "wheel.hub_offset",
                     "--sweep-range", "50:80:2",
                     "--objective", "max-wheel-radius",
                     "--out", str(out)]) == 0
        assert len(read_csv(out)) == 2

    def test_hub_offset_shifts_radius_additively(self, config_file, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--config", config_file,
                     "--sweep-param", "wheel.hub_offset",
                     "--sweep-range", "50:90:5",
                     "--objective", "max-wheel-radius",
                     "--out", str(out)]) == 0
        rows = read_csv(out)
        offsets = [float(r["wheel.hub_offset"]) for r in rows]
        radii = [float(r["wheel_radius_mm"]) for r in rows]
        for i in range(1, len(rows)):
            assert radii[i] - radii[0] == pytest.approx(offsets[i] - offsets[0],
                                                        abs=1e-9)

    def test_sweep_matches_standalone_evaluation(self, config_file, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--config", config_file,
                     "--sweep-param", "screw.screw_level_length",
                     "--sweep-range", "20:40:3",
                     "--objective", "min-peak-torque",
                     "--out", str(out)]) == 0
        rows = read_csv(out)
        from morphwheel.telescopic import module_lengths
        for row in rows:
            p = set_field(reference_design(), "screw.screw_level_length",
                          float(row["screw.screw_level_length"]))
            assert float(row["elongated_length_mm"]) \
                == pytest.approx(module_lengths(p).elongated, abs=1e-9)

    def test_bad_parameter_path_exits_2(self, config_file, tmp_path, capsys):
        assert main(["sweep", "--config", config_file,
                     "--sweep-param", "screw.nope",
                     "--sweep-range", "1:2:3",
                     "--objective", "min-peak-torque",
                     "--out", str(tmp_path / "s.csv")]) == 2
        assert "screw.nope" in capsys.readouterr().err

    def test_bad_range_exits_2(self, config_file, tmp_path):
        assert main(["sweep", "--config", config_file,
                     "--sweep-param", "wheel.hub_offset",
                     "--sweep-range", "1:2",
                     "--objective", "min-peak-torque",
                     "--out", str(tmp_path / "s.csv")]) == 2

import json
import math
from dataclasses import replace

import numpy as np
import pytest

from chemograph import cli
from chemograph.diagnostics import discrete_mass
from chemograph.network import build_grid, validate_dissipative, validate_network
from chemograph.runner import (ConfigError, InitialCondition, PRESET_NAMES,
                               RunConfig, config_from_dict, converge,
                               initial_state, load_config, preset, run, sweep,
                               two_arc_network, twelve_arc_network)

# the node-by-node transmission table of the twelve-arc experiment,
# re-typed independently as (into, from) -> value
TWELVE_ARC_TABLE = {
    "SW": {(12, 12): 0.1, (11, 12): 0.3, (3, 12): 0.3, (4, 12): 0.3,
           (12, 11): 0.2, (11, 11): 0.2, (3, 11): 0.3, (4, 11): 0.3,
           (12, 3): 0.2, (11, 3): 0.2, (3, 3): 0.4, (4, 3): 0.2,
           (12, 4): 0.5, (11, 4): 0.1, (3, 4): 0.2, (4, 4): 0.2},
    "SE": {(3, 3): 0.1, (10, 3): 0.3, (9, 3): 0.3, (2, 3): 0.3,
           (3, 10): 0.2, (10, 10): 0.2, (9, 10): 0.3, (2, 10): 0.3,
           (3, 9): 0.2, (10, 9): 0.2, (9, 9): 0.4, (2, 9): 0.2,
           (3, 2): 0.5, (10, 2): 0.1, (9, 2): 0.2, (2, 2): 0.2},
    "NE": {(1, 1): 0.1, (2, 1): 0.3, (8, 1): 0.3, (7, 1): 0.3,
           (1, 2): 0.2, (2, 2): 0.2, (8, 2): 0.3, (7, 2): 0.3,
           (1, 8): 0.2, (2, 8): 0.2, (8, 8): 0.4, (7, 8): 0.2,
           (1, 7): 0.5, (2, 7): 0.1, (8, 7): 0.2, (7, 7): 0.2},
    "NW": {(5, 5): 0.1, (4, 5): 0.3, (1, 5): 0.3, (6, 5): 0.3,
           (5, 4): 0.2, (4, 4): 0.2, (1, 4): 0.3, (6, 4): 0.3,
           (5, 1): 0.2, (4, 1): 0.2, (1, 1): 0.4, (6, 1): 0.2,
           (5, 6): 0.5, (4, 6): 0.1, (1, 6): 0.2, (6, 6): 0.2},
}
TWELVE_ARC_MEMBERS = {"SW": ((12, 11), (3, 4)), "SE": ((3, 10), (9, 2)),
                      "NE": ((1, 2), (8, 7)), "NW": ((5, 4), (1, 6))}


class TestInitialCondition:
    def test_cosine_amplitude_bound(self):
        ic = InitialCondition("cosine", base=1.0, amplitude=1.5)
        with pytest.raises(ConfigError):
            ic.density(np.linspace(0, 1, 5), 1.0)

    def test_cosine_mass_exact(self):
        ic = InitialCondition("cosine", base=3.0, amplitude=0.3, periods=2)
        assert ic.analytic_mass(5.0) == 15.0

    def test_gaussian_mass_matches_quadrature(self):
        ic = InitialCondition("gaussian", base=2.0, amplitude=1.5,
                              center=0.4, width=0.07)
        x = np.linspace(0, 1, 20001)
        numeric = np.trapezoid(ic.density(x, 1.0), x)
        assert ic.analytic_mass(1.0) == pytest.approx(numeric, rel=1e-9)

    def test_negative_density_rejected(self):
        net = two_arc_network(2.0, 1.0, [[0.8, 0.2], [0.4, 0.6]], 4.0, 1.0)
        ic = {1: InitialCondition("gaussian", base=0.0, amplitude=-1.0),
              2: InitialCondition("constant", base=1.0)}
        cfg = RunConfig(net=net, k=0.005, final_time=1.0, model="linear", initial=ic)
        grid = build_grid(net, 0.005)
        with pytest.raises(ConfigError, match="nonnegative"):
            initial_state(cfg, grid)

    def test_phi_rules(self):
        u = np.array([1.0, 2.0])
        assert np.array_equal(InitialCondition(phi="equal_to_u").phi_level(u), u)
        np.testing.assert_array_equal(InitialCondition(phi=4.0).phi_level(u), [4.0, 4.0])


class TestPresets:
    def test_names_listed(self):
        assert set(PRESET_NAMES) == {
            "two_arc_simplified", "two_arc_full_dissipative",
            "two_arc_full_nondissipative", "twelve_arc", "blowup_single_arc",
            "blowup_two_arc", "convergence_table2", "regime_sweep"}

    def test_unknown_name(self):
        with pytest.raises(ConfigError):
            preset("mystery")

    @pytest.mark.parametrize("name", PRESET_NAMES)
    def test_every_preset_is_valid(self, name):
        cfg = preset(name)
        assert validate_network(cfg.net) == []
        build_grid(cfg.net, cfg.k, cfg.nu)

    def test_simplified_preset_parameters(self):
        cfg = preset("two_arc_simplified")
        arcs = {a.id: a for a in cfg.net.arcs}
        assert arcs[1].length == 4.0 and arcs[1].speed == 2.0
        assert arcs[2].length == 1.0 and arcs[2].speed == 1.0
        assert cfg.alphas == {1: 0.5, 2: 0.5}
        grid = build_grid(cfg.net, cfg.k)
        state, _ = initial_state(cfg, grid)
        assert discrete_mass(state, cfg.net, grid) == pytest.approx(250.0, rel=1e-12)

    def test_twelve_arc_parameters(self):
        cfg = preset("twelve_arc")
        assert len(cfg.net.arcs) == 12
        for arc in cfg.net.arcs:
            assert arc.speed == 10.0 and arc.length == 1.0
            assert arc.diffusivity == 1.0
            assert arc.production == 1.0 and arc.degradation == 1.0
        grid = build_grid(cfg.net, cfg.k)
        assert grid.h[1] == pytest.approx(0.01, rel=1e-14)
        assert cfg.k == 0.0005
        state, _ = initial_state(cfg, grid)
        assert discrete_mass(state, cfg.net, grid) == pytest.approx(1320.0, rel=1e-12)

    def test_twelve_arc_embeds_all_coefficients(self):
        net = twelve_arc_network()
        by_members = {tuple(sorted(n.arc_ids)): n for n in net.nodes}
        for name, (inc, out) in TWELVE_ARC_MEMBERS.items():
            node = by_members[tuple(sorted(inc + out))]
            assert node.incoming == inc and node.outgoing == out
            order = list(inc) + list(out)
            table = TWELVE_ARC_TABLE[name]
            for i, into in enumerate(order):
                for j, src in enumerate(order):
                    assert node.xi[i, j] == table[(into, src)], (name, into, src)
            # the embedded coefficients satisfy the speed condition but are
            # deliberately non-dissipative
            ok, _ = validate_dissipative(node)
            assert not ok

    def test_convergence_preset_total_mass(self):
        cfg = preset("convergence_table2")
        total = sum(cfg.initial[a.id].analytic_mass(a.length) for a in cfg.net.arcs)
        assert total == pytest.approx(120.056, abs=1e-9)

    def test_blowup_two_arc_uses_dissipative_family(self):
        cfg = preset("blowup_two_arc")
        node = cfg.net.nodes[0]
        np.testing.assert_allclose(node.xi, [[0.96, 0.04], [0.02, 0.98]], atol=1e-15)
        ok, _ = validate_dissipative(node)
        assert ok


class TestRun:
    def quick_config(self, **over):
        net = two_arc_network(2.0, 1.0, [[0.8, 0.2], [0.4, 0.6]], 4.0, 1.0)
        ic = {i: InitialCondition("cosine", base=10.0, amplitude=0.1) for i in (1, 2)}
        base = dict(net=net, k=0.005, final_time=0.5, model="full", initial=ic,
                    stop_on_steady=False)
        base.update(over)
        return RunConfig(**base)

    def test_zero_initial_data_immediately_steady(self):
        cfg = self.quick_config(
            initial={i: InitialCondition("constant", base=0.0) for i in (1, 2)},
            stop_on_steady=True, steady_tolerance=1e-10)
        result = run(cfg)
        assert result.termination == "steady"
        assert result.records[-1].t == pytest.approx(cfg.k)

    def test_constant_steady_state_is_fixed_point(self):
        cfg = self.quick_config(
            net=two_arc_network(5.0, 4.0, [[0.8, 0.2], [0.25, 0.75]], 6.0, 2.0),
            k=0.0025,
            initial={i: InitialCondition("constant", base=20.0) for i in (1, 2)},
            final_time=0.25)
        result = run(cfg)
        for u in result.state.u:
            np.testing.assert_allclose(u, 20.0, atol=1e-11)
        for p in result.phi.phi:
            np.testing.assert_allclose(p, 20.0, atol=1e-11)

    def test_deterministic_outputs(self, tmp_path):
        cfg = self.quick_config(snapshot_every=0.1, name="det")
        run(cfg, out_dir=tmp_path / "a")
        run(cfg, out_dir=tmp_path / "b")
        for fname in ("det_snapshots.csv", "det_diagnostics.csv"):
            assert (tmp_path / "a" / fname).read_bytes() == \
                (tmp_path / "b" / fname).read_bytes()

    def test_snapshot_schema(self, tmp_path):
        cfg = self.quick_config(snapshot_every=0.25, name="schema")
        run(cfg, out_dir=tmp_path)
        header = (tmp_path / "schema_snapshots.csv").read_text().splitlines()[0]
        assert header == "t,arc_id,x,u,v,phi"
        header = (tmp_path / "schema_diagnostics.csv").read_text().splitlines()[0]
        assert header == "t,total_mass,energy,max_abs_u,min_u,steady,blowup"

    def test_missing_initial_condition_rejected(self):
        net = two_arc_network(2.0, 1.0, [[0.8, 0.2], [0.4, 0.6]], 4.0, 1.0)
        with pytest.raises(ConfigError, match="initial"):
            RunConfig(net=net, k=0.005, final_time=1.0, model="linear",
                      initial={1: InitialCondition("constant", base=1.0)})

    def test_simplified_drift_bound_enforced(self):
        net = two_arc_network(2.0, 1.0, [[0.8, 0.2], [0.4, 0.6]], 4.0, 1.0)
        ic = {i: InitialCondition("constant", base=1.0) for i in (1, 2)}
        with pytest.raises(ConfigError, match="alpha"):
            RunConfig(net=net, k=0.005, final_time=1.0, model="simplified",
                      initial=ic, alphas={1: 0.5, 2: 1.5})


class TestJsonConfig:
    def document(self):
        return {
            "name": "json_case",
            "model": "simplified",
            "time_step": 0.005,
            "final_time": 0.2,
            "stop_on_steady": False,
            "arcs": [
                {"id": 1, "length": 4.0, "lambda": 2.0, "alpha": 0.5},
                {"id": 2, "length": 1.0, "lambda": 1.0, "alpha": 0.5},
            ],
            "nodes": [
                {"id": 1, "incoming": [1], "outgoing": [2],
                 "xi": [[0.8, 0.2], [0.4, 0.6]],
                 "kappa": [[0.0, 1.0], [1.0, 0.0]]},
            ],
            "outer_incoming": [1],
            "outer_outgoing": [2],
            "initial": [
                {"arc": 1, "kind": "cosine", "base": 50.0, "amplitude": 0.1},
                {"arc": 2, "kind": "cosine", "base": 50.0, "amplitude": 0.1},
            ],
        }

    def test_round_trip_matches_programmatic_config(self, tmp_path):
        path = tmp_path / "case.json"
        path.write_text(json.dumps(self.document()))
        cfg = load_config(path)
        assert cfg.model == "simplified"
        assert cfg.alphas == {1: 0.5, 2: 0.5}
        result = run(cfg)
        assert result.max_mass_drift < 1e-12

    def test_bad_document_reports_config_error(self):
        doc = self.document()
        del doc["time_step"]
        with pytest.raises(ConfigError):
            config_from_dict(doc)


class TestConverge:
    def test_exact_constant_all_errors_zero(self):
        net = two_arc_network(5.0, 4.0, [[0.8, 0.2], [0.25, 0.75]], 6.0, 2.0)
        ic = {i: InitialCondition("constant", base=20.0) for i in (1, 2)}
        cfg = RunConfig(net=net, k=0.005, final_time=0.1, model="full",
                        initial=ic, stop_on_steady=False)
        rows = converge(cfg, levels=1)
        for err in rows[0].errors_u.values():
            assert err <= 1e-12
        assert rows[0].order_u is None or math.isinf(rows[0].order_u)


class TestSweep:
    def test_single_cell_matches_plain_run(self):
        from chemograph.diagnostics import classify_regime
        cfg = replace(preset("regime_sweep"), final_time=0.5)
        cells = sweep(cfg, [5.0], [4.0])
        assert len(cells) == 1
        cell = cells[0]
        direct = run(replace(cfg, k=cell.k))
        assert cell.classification == classify_regime(direct)

    def test_inadmissible_cell_skipped(self):
        cfg = replace(preset("regime_sweep"), final_time=0.5)
        cells = sweep(cfg, [10.0], [0.1])   # xi11 = 0.96 < 1 - 0.1/10 = 0.99
        assert cells[0].classification == "skipped"


class TestCli:
    def test_preset_list(self, capsys):
        assert cli.main(["preset", "list"]) == 0
        out = capsys.readouterr().out.split()
        assert set(out) == set(PRESET_NAMES)

    def test_validate_preset(self, capsys):
        assert cli.main(["validate", "--preset", "two_arc_simplified"]) == 0
        assert "configuration valid" in capsys.readouterr().out

    def test_validate_bad_config(self, tmp_path, capsys):
        doc = {"model": "full", "time_step": 0.1, "final_time": 1.0,
               "arcs": [{"id": 1, "length": 1.0, "lambda": 3.0}],
               "outer_incoming": [1], "outer_outgoing": [1],
               "initial": [{"arc": 1, "kind": "constant", "base": 1.0}]}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        # L / (2 k lambda) = 1.666... is not an integer
        assert cli.main(["validate", "--config", str(path)]) == 1

    def test_run_writes_outputs_and_exit_zero(self, tmp_path, capsys):
        rc = cli.main(["run", "--preset", "two_arc_full_dissipative",
                       "--out", str(tmp_path), "--final-time", "0.05"])
        assert rc == 0
        assert (tmp_path / "two_arc_full_dissipative_diagnostics.csv").exists()

    def test_blowup_exit_code(self, tmp_path):
        rc = cli.main(["run", "--preset", "blowup_single_arc",
                       "--out", str(tmp_path), "--final-time", "0.3"])
        assert rc == 2

    def test_steady_oracle_comparison(self, capsys):
        rc = cli.main(["steady", "--preset", "two_arc_full_dissipative",
                       "--final-time", "4.0"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "oracle U=20" in out

    def test_missing_source_is_error(self, capsys):
        assert cli.main(["run"]) == 1

import json

import pytest

from harness.report import (AlgorithmResult, ComplexityRow, ComplexityTable, SweepRow, SweepTable,
                            TrialReport, emit, load_report, render)
from utils.errors import EmitError


def trial_report(**overrides):
    fields = dict(
        seed=4,
        topology={"ud": [[1.0, 2.0, 1.0]], "dd": [[30.0, 2.0, 1.0]], "ur": [[5.0, 5.0, 10.0]],
                  "dr": [[25.0, 5.0, 10.0]], "ap": [[20.0, 20.0, 10.0]]},
        ul_sums=[1.0 / 3.0],
        dl_sums=[2.0],
        ul_realized_sums=[0.3],
        ul_sinrs=[[0.2599210498948732]],
        dl_sinrs=[[3.0]],
        powers=[[0.19952623149688797]],
        power_converged=[True],
        power_iterations=[2],
        results=[AlgorithmResult(algorithm="gs", pairs=[[0, 0]], tau=1, evaluations=1,
                                 rate=1.0 / 3.0, rate_with_overhead=0.33, stable=True)],
        elapsed_s=1.25,
    )
    fields.update(overrides)
    return TrialReport(**fields)


def sweep_table():
    rows = [SweepRow(axis_value=v, algorithm=a, mean_rate=r, stderr=0.01, mean_tau=t, trials=2)
            for v, a, r, t in [(10.0, "gs", 1.0, 3.0), (10.0, "es", 1.5, 6.0),
                               (20.0, "gs", 2.0, 3.5), (20.0, "es", 2.5, 6.0)]]
    return SweepTable(axis="power_dbm", values=[10.0, 20.0], rows=rows)


def test_json_rounds_and_sorts():
    text = render(trial_report(), "json")
    assert text.endswith("}\n")
    data = json.loads(text)
    assert data["ul_sums"] == [0.333333333]
    assert data["powers"] == [[0.199526231]]
    assert "elapsed_s" not in data
    assert list(data) == sorted(data)


def test_csv_rows():
    text = render(trial_report(), "csv")
    header, row = text.splitlines()
    assert header == "seed,interval,algorithm,rate,rate_with_overhead,tau,evaluations,stable"
    assert row == "4,0,gs,0.333333333,0.33,1,1,true"

    sweep = render(sweep_table(), "csv").splitlines()
    assert sweep[0] == "axis_value,algorithm,mean_rate,stderr,mean_tau,trials"
    assert sweep[1] == "10,gs,1,0.01,3,2"
    assert sweep_table().series("es") == [1.5, 2.5]


def test_complexity_csv_leaves_missing_cells_empty():
    table = ComplexityTable(rows=[ComplexityRow(irs=12, gs_proposals=40.5, trials=3)])
    assert render(table, "csv").splitlines()[1] == "12,,40.5,3"


def test_unknown_format():
    with pytest.raises(ValueError):
        render(sweep_table(), "xml")


def test_emit_writes_atomically_and_reloads(tmp_path):
    path = tmp_path / "out" / "trial.json"
    text = emit(trial_report(), "json", path)

    assert path.read_text() == text
    assert not list(path.parent.glob("*.tmp"))
    reloaded = load_report(path)
    assert isinstance(reloaded, TrialReport)
    assert render(reloaded, "json") == text


@pytest.mark.parametrize("factory, model", [
    (sweep_table, SweepTable),
    (lambda: ComplexityTable(rows=[ComplexityRow(irs=2, es_evaluations=2.0, gs_proposals=2.5,
                                                 trials=1)], gs_exponent=1.5), ComplexityTable),
])
def test_load_report_picks_model(tmp_path, factory, model):
    path = tmp_path / "table.json"
    emit(factory(), "json", path)
    assert isinstance(load_report(path), model)


def test_emit_to_stdout(capsys):
    emit(sweep_table(), "csv", "-")
    assert capsys.readouterr().out.startswith("axis_value,")


def test_emit_failure_raises_emit_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(EmitError) as info:
        emit(sweep_table(), "csv", blocker / "out.csv")
    assert info.value.path == str(blocker / "out.csv")


def test_load_report_rejects_foreign_json(tmp_path):
    path = tmp_path / "other.json"
    path.write_text('{"hello": 1}')
    with pytest.raises(EmitError):
        load_report(path)
    with pytest.raises(EmitError):
        load_report(tmp_path / "missing.json")


def test_negative_rate_rejected():
    with pytest.raises(ValueError):
        AlgorithmResult(algorithm="gs", pairs=[], tau=0, evaluations=0, rate=-1.0,
                        rate_with_overhead=0.0, stable=True)


def test_empty_sweep_is_header_only():
    table = SweepTable(axis="cee", values=[], rows=[])
    assert render(table, "csv") == "axis_value,algorithm,mean_rate,stderr,mean_tau,trials\n"

import json
import math

import numpy as np
import pytest

from fchybrid import presets
from fchybrid.errors import ValidationError
from fchybrid.profile import PowerProfile, profile_stats
from fchybrid.report import (
    COMPARISON_CSV_HEADER,
    ComparisonRow,
    compare,
    emit,
)
from fchybrid.simulator import simulate
from fchybrid.sizing import size_hybrid, SizingInputs

TABLE_CSV = """\
label,stack_mass_kg,fuel_mass_kg,energy_density_wh_per_kg,system_life_h,run_time_h,load_basis_w,feasible_at_peak
NiMH battery,,,40,3000,3,16,true
Li-ion battery,,,120,9000,9,16,true
fuel cell,0.3,0.9,4950,119.949,99,45,false
fuel cell hybrid,0.15,0.8,4950,26280,88,45,true
"""


def flat(power=45.0, duration=100.0):
    return PowerProfile(times=np.array([0.0, duration]),
                        power=np.array([power, power]), name="flat")


class TestCompare:
    def test_reference_table_rows(self):
        rows = compare(presets.comparison_sizings())
        assert [r.label for r in rows] == [
            "NiMH battery", "Li-ion battery", "fuel cell", "fuel cell hybrid"]
        assert [r.stack_mass for r in rows][:2] == [None, None]
        assert [r.fuel_mass for r in rows][:2] == [None, None]
        assert [r.feasible_at_peak for r in rows] == [True, True, False, True]
        assert [r.load_basis for r in rows] == [16.0, 16.0, 45.0, 45.0]
        assert [r.run_time for r in rows] == [3.0, 9.0, 99.0, 88.0]

    def test_config_entries(self):
        rows = compare([presets.hybrid_config()])
        row = rows[0]
        assert row.label == "hybrid"
        assert row.stack_mass == 0.15
        assert row.fuel_mass == 0.8
        assert math.isclose(row.run_time, 88.27)
        assert row.feasible_at_peak

    def test_battery_config_entry(self):
        row = compare([presets.nimh_config()], battery_load=16.0)[0]
        assert row.label == "NiMH battery"
        assert row.stack_mass is None
        assert row.fuel_mass is None
        assert row.run_time == 3.0

    def test_duplicate_entries_give_identical_rows(self):
        a, b = compare([presets.hybrid_config(), presets.hybrid_config()])
        assert a == b

    def test_custom_peak_changes_verdict(self):
        rows = compare(presets.comparison_sizings(), peak_power=90.0)
        # the bare stack rates exactly 90 W, so it passes at that peak
        assert [r.feasible_at_peak for r in rows] == [True, True, True, True]

    def test_unknown_entry_rejected(self):
        with pytest.raises(ValidationError):
            compare(["not a config"])


class TestEmitComparison:
    def test_reference_table_csv(self):
        text = emit(compare(presets.comparison_sizings()), "csv")
        assert text == TABLE_CSV
        assert text.splitlines()[0] == COMPARISON_CSV_HEADER

    def test_emission_is_stable(self):
        a = emit(compare(presets.comparison_sizings()), "csv")
        b = emit(compare(presets.comparison_sizings()), "csv")
        assert a == b

    def test_json_round_trip(self):
        rows = compare(presets.comparison_sizings())
        payload = json.loads(emit(rows, "json"))
        assert len(payload) == 4
        assert payload[0]["stack_mass_kg"] is None
        assert payload[3]["label"] == "fuel cell hybrid"
        assert payload[3]["run_time_h"] == 88.0
        assert payload[2]["feasible_at_peak"] is False
        again = json.loads(emit(rows, "json"))
        assert payload == again


class TestEmitSimulation:
    def test_kv_csv_without_flows(self):
        res = simulate(presets.hybrid_config(), flat(), dt=1.0)
        text = emit(res, "csv")
        lines = text.splitlines()
        assert lines[0] == "key,value"
        keys = [ln.split(",")[0] for ln in lines[1:]]
        assert "run_time_h" in keys
        assert "termination" in keys
        assert "flows" not in keys

    def test_flow_csv_when_recorded(self):
        res = simulate(presets.hybrid_config(), flat(), dt=1.0,
                       record_flows=True, flow_stride=10)
        text = emit(res, "csv")
        lines = text.splitlines()
        assert lines[0] == ("time_s,demand_w,fc_output_w,battery_power_w,"
                            "unmet_w,curtailed_w,soc")
        assert len(lines) == 1 + len(res.flows)
        assert lines[1].startswith("0,45,")

    def test_json_omits_empty_flows(self):
        res = simulate(presets.hybrid_config(), flat(), dt=1.0)
        payload = json.loads(emit(res, "json"))
        assert "flows" not in payload
        assert payload["termination"] == "profile_ended"
        assert payload["steps"] == res.steps

    def test_json_keeps_recorded_flows(self):
        res = simulate(presets.hybrid_config(), flat(), dt=1.0,
                       record_flows=True, flow_stride=25)
        payload = json.loads(emit(res, "json"))
        assert len(payload["flows"]) == len(res.flows)
        assert payload["flows"][0]["demand_w"] == 45.0

    def test_six_digit_quantization(self):
        res = simulate(presets.hybrid_config(),
                       flat(power=1.0, duration=88.26944 * 3600), dt=3600.0)
        payload = json.loads(emit(res, "json"))
        assert payload["run_time_h"] == 88.2694


class TestEmitOthers:
    def test_sizing_payloads(self):
        sized = size_hybrid(SizingInputs(1.2, 45.0, 250.0))
        payload = json.loads(emit(sized, "json"))
        assert payload["stack_mass_kg"] == 0.15
        assert payload["fuel_mass_kg"] == 0.8
        assert payload["run_time_h"] == 88.0
        assert payload["feasible"] is True
        assert payload["warnings"] == []
        csv_text = emit(sized, "csv")
        assert "stack_mass_kg,0.15" in csv_text
        assert "feasible,true" in csv_text

    def test_sizing_list(self):
        results = presets.comparison_sizings()
        payload = json.loads(emit(results, "json"))
        assert [p["label"] for p in payload] == [r.label for r in results]
        csv_text = emit(results, "csv")
        assert csv_text.count("key,value") == len(results)

    def test_stats_payload(self):
        stats = profile_stats(flat(45.0, duration=3600.0))
        payload = json.loads(emit(stats, "json"))
        assert payload["average_power_w"] == 45.0
        assert payload["duration_s"] == 3600.0
        assert payload["energy_wh"] == 45.0

    def test_unknown_object_rejected(self):
        with pytest.raises(ValidationError):
            emit({"not": "supported"})

    def test_unknown_format_rejected(self):
        with pytest.raises(ValidationError):
            emit(compare(presets.comparison_sizings()), "yaml")

    def test_handmade_row_with_none_masses(self):
        row = ComparisonRow(label="pack", stack_mass=None, fuel_mass=None,
                            energy_density=40.0, system_life=3000.0,
                            run_time=3.0, load_basis=16.0,
                            feasible_at_peak=False)
        assert emit([row], "csv").splitlines()[1] == "pack,,,40,3000,3,16,false"

import json

import pandas as pd
import pytest

from config import load_config_file
from main import main, parse_choices, profile_overrides
from models import AttributeId, ConfigError, Method, RatType, TrafficClass, Weighting
from weighting import ahp_weights, bwm_weights

FAST = ["--pack-size", "6", "--gwo-iters", "5"]


def simulate(tmp_path, *extra, name="stats.csv"):
    out = tmp_path / name
    argv = ["-q", "simulate", "--iterations", "3", "--seed", "7", "--out", str(out), *FAST, *extra]
    return main(argv), out


class TestConfigFile:
    """Test suite for flat key=value config files"""

    def test_keys_normalized(self, tmp_path):
        """Test keys are lower-cased with dashes as underscores"""
        path = tmp_path / "run.env"
        path.write_text("ITERATIONS=10\npack-size=8\nprofile_WiFi_CB=1,2\n")
        assert load_config_file(path) == {"iterations": "10", "pack_size": "8", "profile_wifi_cb": "1,2"}

    def test_unknown_key(self, tmp_path):
        """Test an unknown key is a config error"""
        path = tmp_path / "run.env"
        path.write_text("iterationz=10\n")
        with pytest.raises(ConfigError):
            load_config_file(path)

    def test_empty_value(self, tmp_path):
        """Test a key without a value is a config error"""
        path = tmp_path / "run.env"
        path.write_text("seed=\n")
        with pytest.raises(ConfigError):
            load_config_file(path)

    def test_missing_file(self, tmp_path):
        """Test a missing file is a config error"""
        with pytest.raises(ConfigError):
            load_config_file(tmp_path / "absent.env")

    def test_profile_overrides(self):
        """Test profile entries replace single ranges of the built-in profiles"""
        profiles = profile_overrides({"profile_5g_dr": "500,600", "seed": "1"})
        ranges = {p.rat: p.ranges for p in profiles}
        assert ranges[RatType.FIVE_G][AttributeId.DR] == (500.0, 600.0)
        assert ranges[RatType.WIFI][AttributeId.DR] == (1.0, 11.0)
        assert profile_overrides({"seed": "1"}) is None

    def test_bad_profile_attribute(self):
        """Test an unknown attribute in a profile key is a config error"""
        with pytest.raises(ConfigError):
            profile_overrides({"profile_wifi_speed": "1,2"})

    def test_parse_choices(self):
        """Test comma-separated enum lists and the all keyword"""
        assert parse_choices("ahp,bwm-gwo", Weighting, "weighting") == (Weighting.AHP, Weighting.BWM_GWO)
        assert parse_choices("all", Method, "method") == (Method.TOPSIS, Method.SAW)


class TestSimulate:
    """Test suite for the simulate command"""

    def test_two_rows(self, tmp_path, capsys):
        """Test one method, two weightings, one class and one removal give two rows"""
        code, out = simulate(tmp_path, "--method", "topsis", "--weighting", "ahp,bwm-gwo",
                             "--class", "streaming", "--removal", "worst")
        assert code == 0
        frame = pd.read_csv(out)
        assert len(frame) == 2
        assert frame["weighting"].tolist() == ["ahp", "bwm-gwo"]
        assert frame["iterations"].tolist() == [3, 3]
        assert "incidence" in capsys.readouterr().out

    def test_byte_identical(self, tmp_path):
        """Test the same flags produce identical files"""
        flags = ("--method", "saw", "--weighting", "ahp,gwo", "--class", "background", "--format", "json")
        _, first = simulate(tmp_path, *flags, name="a.json")
        _, second = simulate(tmp_path, *flags, name="b.json")
        assert first.read_bytes() == second.read_bytes()
        assert len(json.loads(first.read_text())["stats"]) == 2

    def test_config_file_and_flag_precedence(self, tmp_path):
        """Test config file values apply and flags override them"""
        config = tmp_path / "run.env"
        config.write_text("method=saw\nweighting=bwm\nclass=interactive\nremoval=best,worst\niterations=50\n")
        code, out = simulate(tmp_path, "--config", str(config))
        assert code == 0
        frame = pd.read_csv(out)
        assert frame["removal"].tolist() == ["best", "worst"]
        assert frame["method"].unique().tolist() == ["saw"]
        assert frame["iterations"].unique().tolist() == [3]

    def test_missing_config(self, tmp_path, capsys):
        """Test a missing config file exits with code 2"""
        code, _ = simulate(tmp_path, "--config", str(tmp_path / "absent.env"))
        assert code == 2
        assert "not found" in capsys.readouterr().err

    def test_bad_weighting(self, tmp_path):
        """Test an unknown weighting is a usage error"""
        code, _ = simulate(tmp_path, "--weighting", "entropy")
        assert code == 2

    def test_bad_networks(self, tmp_path, capsys):
        """Test a network count that does not split over four RATs exits with code 2"""
        code, _ = simulate(tmp_path, "--networks", "6", "--weighting", "ahp")
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_non_convex_mix(self, tmp_path):
        """Test alpha + beta != 1 exits with code 2"""
        code, _ = simulate(tmp_path, "--alpha", "0.5", "--beta", "0.6")
        assert code == 2


class TestWeights:
    """Test suite for the weights command"""

    def _weights(self, capsys, *argv):
        assert main(["-q", "weights", "--format", "json", *argv]) == 0
        return json.loads(capsys.readouterr().out)

    def test_ahp_row(self, capsys):
        """Test the AHP scheme prints the published streaming row"""
        payload = self._weights(capsys, "--class", "streaming", "--weighting", "ahp")
        assert payload["combined"] == ahp_weights(TrafficClass.STREAMING).as_dict()

    def test_bwm_head_heaviest(self, capsys):
        """Test the BWM conversational vector is largest on D"""
        payload = self._weights(capsys, "--class", "conversational", "--weighting", "bwm")
        combined = payload["combined"]
        assert max(combined, key=combined.get) == "D"
        assert payload["xi_star"] >= 0.0

    def test_pure_subjective_mix(self, capsys):
        """Test alpha=1, beta=0 reproduces the BWM vector"""
        payload = self._weights(capsys, "--class", "interactive", "--weighting", "bwm-gwo",
                                "--alpha", "1", "--beta", "0", *FAST)
        assert payload["combined"] == bwm_weights(TrafficClass.INTERACTIVE).w_star.as_dict()
        assert set(payload) >= {"subjective", "objective", "combined"}

    def test_save_matrix(self, tmp_path, capsys):
        """Test the generated matrix is written and can be ranked"""
        path = tmp_path / "m.csv"
        self._weights(capsys, "--class", "streaming", "--weighting", "gwo", "--save-matrix", str(path), *FAST)
        assert main(["-q", "rank", "--matrix", str(path)]) == 0
        assert len(capsys.readouterr().out.strip().splitlines()) == 8

    def test_table_output(self, capsys):
        """Test the table format prints the consistency ratio for BWM"""
        assert main(["-q", "weights", "--class", "background", "--weighting", "bwm"]) == 0
        assert "consistency ratio" in capsys.readouterr().out


class TestRank:
    """Test suite for the rank command"""

    def test_single_row(self, tmp_path, capsys):
        """Test a single candidate is ranked first"""
        path = tmp_path / "m.csv"
        path.write_text("rat,cb,s,dr,d,j,plr\nLTE-0,45,60,50,100,5,30\n")
        assert main(["-q", "rank", "--matrix", str(path), "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["ranking"] == [{"rank": 1, "candidate": "LTE-0", "score": 0.5}]

    def test_dominating_5g(self, tmp_path, capsys):
        """Test a dominating 5G row ranks first under TOPSIS"""
        path = tmp_path / "m.csv"
        path.write_text(
            "rat,cb,s,dr,d,j,plr\n"
            "WiFi-0,10,50,10,140,15,50\n"
            "LTE-0,45,60,50,100,5,30\n"
            "5G-0,5,70,900,2,1,5\n"
        )
        assert main(["-q", "rank", "--matrix", str(path), "--method", "topsis", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["ranking"][0]["candidate"] == "FiveG-0"

    def test_malformed_header(self, tmp_path, capsys):
        """Test a malformed header exits with code 2 naming the column"""
        path = tmp_path / "m.csv"
        path.write_text("rat,cb,security,dr,d,j,plr\nLTE-0,45,60,50,100,5,30\n")
        assert main(["-q", "rank", "--matrix", str(path)]) == 2
        assert "security" in capsys.readouterr().err


class TestWeightStudy:
    """Test suite for the weight-study command"""

    def test_json_results(self, capsys):
        """Test one result per method with shares in [0, 1]"""
        argv = ["-q", "weight-study", "--class", "streaming", "--scenarios", "2", "--format", "json", *FAST]
        assert main(argv) == 0
        results = json.loads(capsys.readouterr().out)["results"]
        assert [r["method"] for r in results] == ["topsis", "saw"]
        assert all(0.0 <= share <= 1.0 for r in results for share in r["exceeds_ahp_share"].values())

import math

import pytest
from fastapi.testclient import TestClient

from spinsym.service.app import app

client = TestClient(app)


class TestHealth:
    def test_health(self):
        response = client.get("/health")
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "ok"


class TestCount:
    def test_spin_one_sector_count(self):
        response = client.post(
            "/count", json={"lattice": "chain:3", "spin": "1", "mz": "0"}
        )
        assert response.status_code == 200
        assert response.json()["dimension"] == 7

    def test_large_binomial(self):
        response = client.post(
            "/count", json={"lattice": "chain:16", "spin": "1/2", "mz": "0"}
        )
        assert response.json()["dimension"] == 12870

    def test_infeasible_is_zero(self):
        response = client.post(
            "/count", json={"lattice": "chain:4", "spin": "1/2", "mz": "5/2"}
        )
        assert response.status_code == 200
        assert response.json()["dimension"] == 0

    def test_invalid_lattice(self):
        response = client.post(
            "/count", json={"lattice": "tri:7", "spin": "1/2", "mz": "0"}
        )
        assert response.status_code == 400
        assert response.json()["error"]["code"] == "invalid"

    def test_invalid_spin(self):
        response = client.post(
            "/count", json={"lattice": "chain:4", "spin": "1/3", "mz": "0"}
        )
        assert response.status_code == 400


class TestOrbits:
    def test_four_site_zero_sector(self):
        response = client.post(
            "/orbits", json={"lattice": "chain:4", "spin": "1/2", "mz": "0"}
        )
        body = response.json()
        assert body["dimension"] == 6
        assert body["group_order"] == 8 and body["abstract_group_order"] == 8
        assert sorted(row["size"] for row in body["orbits"]) == [2, 4]
        assert sum(row["size"] for row in body["orbits"]) == body["dimension"]

    def test_sector_cap_maps_to_413(self):
        response = client.post(
            "/orbits",
            json={
                "lattice": "chain:16",
                "spin": "1/2",
                "mz": "0",
                "options": {"sector_cap": 100},
            },
        )
        assert response.status_code == 413
        assert response.json()["error"]["code"] == "resource"


class TestGround:
    def test_four_site_antiferromagnet(self):
        response = client.post(
            "/ground", json={"lattice": "chain:4", "spin": "1/2", "J": -1.0}
        )
        assert response.status_code == 200
        body = response.json()
        assert body["method"] == "symmetric"
        assert body["energy"]["per_spin"] == pytest.approx(-0.5, abs=1e-12)
        assert body["S"] == "0" and body["M"] == "0"
        assert body["orbit_count"] == 2
        assert body["dims"]["sector_dim"] == 6
        assert len(body["amplitudes"]) == 6
        assert body["energy"]["reference_infinite_chain_per_spin"] == pytest.approx(
            0.25 - math.log(2.0)
        )
        assert body["observables"]["staggered_m_sq"] == pytest.approx(0.5, abs=1e-10)

    def test_raw_fallback_shape(self):
        response = client.post(
            "/ground", json={"lattice": "chain:6", "spin": "1/2", "J": -1.0}
        )
        body = response.json()
        assert body["method"] == "raw-dense"
        assert body["orbit_count"] is None
        assert body["dims"]["symmetric_dim"] is None
        assert body["warnings"]
        assert body["ground_multiplicity"] == 1

    def test_lanczos_convergence_error_maps_to_500(self):
        response = client.post(
            "/ground",
            json={
                "lattice": "chain:10",
                "spin": "1/2",
                "J": -1.0,
                "method": "raw-lanczos",
                "options": {"lanczos_max_iter": 2, "lanczos_tol": 1e-14},
            },
        )
        assert response.status_code == 500
        assert response.json()["error"]["code"] == "solver"

    def test_validation_error_is_422(self):
        response = client.post("/ground", json={"lattice": "chain:4"})
        assert response.status_code == 422


class TestClassify:
    def test_table_shape(self):
        response = client.post(
            "/classify", json={"lattice": "chain:4", "spin": "1/2", "J": -1.0}
        )
        body = response.json()
        assert len(body["rows"]) == 9
        assert body["total_states"] == 16
        first = body["rows"][0]
        assert first["e0_per_spin"] == pytest.approx(-0.5, abs=1e-10)
        del first["e0_per_spin"]
        assert first == {
            "theta": "Theta_0",
            "gamma": "A1",
            "xi": "Xi_0",
            "S": "0",
            "M": "0",
            "energy": "-0.500000",
            "h_coefficient": 0.0,
            "degeneracy_h0": 1,
            "degeneracy_h": "1",
        }

    def test_rejects_non_chain(self):
        response = client.post(
            "/classify", json={"lattice": "square:2x2", "spin": "1/2", "J": -1.0}
        )
        assert response.status_code == 400


class TestSweep:
    def test_crossing_grid(self):
        response = client.post(
            "/sweep",
            json={
                "lattice": "chain:4",
                "spin": "1/2",
                "J": -1.0,
                "h_start": 0.0,
                "h_stop": 3.0,
                "h_step": 0.5,
            },
        )
        body = response.json()
        assert [row["h"] for row in body["rows"]] == [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]
        assert body["rows"][0]["S"] == "0"
        assert body["rows"][-1]["S"] == "2" and body["rows"][-1]["M"] == "2"

    def test_rejects_negative_step(self):
        response = client.post(
            "/sweep",
            json={
                "lattice": "chain:4",
                "spin": "1/2",
                "J": -1.0,
                "h_stop": 1.0,
                "h_step": -0.1,
            },
        )
        assert response.status_code == 422

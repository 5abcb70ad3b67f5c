import numpy as np
import pytest

from conftest import make_area, make_obs_type, make_scenario
from safesim.events import xi_of_theta
from safesim.intervention import apply_feedback, step_theta


class TestApplyFeedback:
    def test_single_observation(self):
        # 0.5 + (1 - 0.5) * 0.03 = 0.515
        assert apply_feedback(0.5, [1], 0, [0.03], 0.0) == pytest.approx(0.515, abs=1e-15)

    def test_zero_counts_leave_theta_unchanged(self):
        assert apply_feedback(0.42, [0, 0], 0, [0.03, 0.05], 0.1) == 0.42

    def test_saturation_clamped_to_one(self):
        assert apply_feedback(0.9, [10], 30, [0.03], 0.05) == 1.0

    def test_multiple_types_sum(self):
        # drive = 2*0.03 + 1*0.02 = 0.08; 0.5 + 0.5*0.08 = 0.54
        assert apply_feedback(0.5, [2, 1], 0, [0.03, 0.02], 0.0) == pytest.approx(0.54)

    def test_incident_feedback_contributes(self):
        # drive = 3*0.05; 0.2 + 0.8*0.15 = 0.32
        assert apply_feedback(0.2, [0], 3, [0.03], 0.05) == pytest.approx(0.32)

    def test_monotone_in_counts_and_theta_headroom(self):
        base = apply_feedback(0.5, [1], 0, [0.03], 0.0)
        assert apply_feedback(0.5, [2], 0, [0.03], 0.0) > base
        assert apply_feedback(0.5, [1], 1, [0.03], 0.01) > base
        # lower theta has more headroom, so the same drive moves it further
        assert apply_feedback(0.2, [1], 0, [0.03], 0.0) - 0.2 > base - 0.5


class TestStepTheta:
    def setup_method(self):
        self.area = make_area(k_decay=0.95)
        self.scenario = make_scenario(
            areas=(self.area,), obs_types=(make_obs_type(delta_neg=0.03),), delta_e=0.0
        )

    def test_decay_when_nothing_observed(self):
        # delta_e = 0: even many incidents leave the decay path in force
        for n_e in (0, 3, 50):
            assert step_theta(0.55, self.area, [0], n_e, self.scenario) == pytest.approx(
                0.5225, abs=1e-15
            )

    def test_feedback_path_when_unsafe_event_observed(self):
        result = step_theta(0.55, self.area, [1], 0, self.scenario)
        assert result == pytest.approx(0.55 + 0.45 * 0.03)
        assert result >= 0.55

    def test_incident_feedback_when_delta_e_positive(self):
        scenario = make_scenario(
            areas=(self.area,), obs_types=(make_obs_type(delta_neg=0.03),), delta_e=0.1
        )
        assert step_theta(0.5, self.area, [0], 2, scenario) == pytest.approx(0.5 + 0.5 * 0.2)

    def test_paths_are_mutually_exclusive(self):
        # zero drive decays, positive drive improves; no mixed outcome
        decayed = step_theta(0.6, self.area, [0], 0, self.scenario)
        fed = step_theta(0.6, self.area, [1], 0, self.scenario)
        assert decayed < 0.6 < fed

    def test_theta_stays_in_unit_interval(self):
        rng = np.random.default_rng(5)
        theta = 0.5
        for _ in range(2_000):
            n_obs = int(rng.integers(0, 40))
            n_e = int(rng.integers(0, 10))
            theta = step_theta(theta, self.area, [n_obs], n_e, self.scenario)
            assert 0.0 <= theta <= 1.0


class TestDynamicsShape:
    def test_pure_decay_trajectory_is_geometric(self):
        # with all deltas 0, theta(t) = theta0 * k^t and xi rises toward xi_base
        area = make_area(xi_base=0.63, k_decay=0.95, theta0=0.55)
        scenario = make_scenario(areas=(area,), obs_types=(make_obs_type(delta_neg=0.0),))
        theta, thetas = 0.55, []
        for _ in range(200):
            theta = step_theta(theta, area, [5], 2, scenario)  # deltas are all zero
            thetas.append(theta)
        expected = 0.55 * np.power(0.95, np.arange(1, 201))
        assert np.allclose(thetas, expected, rtol=1e-12)

        xis = [xi_of_theta(t, area.xi_base) for t in [0.55] + thetas]
        assert all(b > a for a, b in zip(xis, xis[1:]))
        assert xis[-1] < area.xi_base
        assert area.xi_base - xis[-1] < 1e-4

    def test_feedback_drop_then_relaxation(self):
        # an observed unsafe event drops xi at once; quiet days drift it back up
        area = make_area(xi_base=0.5, k_decay=0.9, theta0=0.4)
        scenario = make_scenario(areas=(area,), obs_types=(make_obs_type(delta_neg=0.1),))
        theta = 0.4
        xi_before = xi_of_theta(theta, area.xi_base)
        theta = step_theta(theta, area, [1], 0, scenario)
        xi_after_feedback = xi_of_theta(theta, area.xi_base)
        assert xi_after_feedback < xi_before

        xis = [xi_after_feedback]
        for _ in range(30):
            theta = step_theta(theta, area, [0], 0, scenario)
            xis.append(xi_of_theta(theta, area.xi_base))
        assert all(b > a for a, b in zip(xis, xis[1:]))
        assert xis[-1] < area.xi_base

import pytest

from groundair.model import MissionInstance, VehicleParams


def make_params(**kw):
    base = dict(ugv_capacity=1e6, uav_capacity=10.0, uav_flight_cost=2.5, uav_survey_cost=1.0,
                ugv_cost=1.0, ugv_carry_cost=1.0, charge_rate=100.0, uav_speed=1.0, ugv_speed=1.0,
                survey_time=0.0)
    base.update(kw)
    return VehicleParams(**base)


@pytest.fixture
def one_site():
    """Start at the origin, one site 4 km east; level 0.5 gives r = 1, level 1.0 gives r = 2."""
    def build(levels=(0.5, 1.0), **kw):
        return MissionInstance((0.0, 0.0), [(4.0, 0.0)], make_params(**kw), levels)
    return build


# one (criterion, verdict, detail) entry per acceptance test, echoed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)

import pytest

from uav_iab.scenario import (AltitudeBounds, GnbNode, Position3D, RadioConfig, Scenario,
                              UavNode, UserNode, ChannelParams)

# Lines appended by the acceptance suite, echoed after the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def make_scenario(users, uavs=(), gnb=(750.0, 750.0, 25.0), *, radio=None, channel=None,
                  area=(1500.0, 1500.0), z=(100.0, 500.0), gnb_antennas=8, uav_antennas=2):
    """Hand-placed scenario: ``users`` and ``uavs`` are sequences of xyz triples."""
    return Scenario(
        radio=radio or RadioConfig(),
        gnb=GnbNode(Position3D(*gnb), gnb_antennas),
        uavs=tuple(UavNode(d + 1, Position3D(*p), uav_antennas) for d, p in enumerate(uavs)),
        users=tuple(UserNode(i + 1, Position3D(*p)) for i, p in enumerate(users)),
        bounds=AltitudeBounds.for_area(area, z),
        area=area,
        channel=channel or ChannelParams(),
    )


@pytest.fixture
def two_hotspots():
    """One UE pair near the gNB, one far away, one UAV parked above the far pair."""
    users = [(700.0, 760.0, 1.5), (710.0, 740.0, 1.5), (1300.0, 1250.0, 1.5), (1320.0, 1280.0, 1.5)]
    return make_scenario(users, uavs=[(1300.0, 1250.0, 200.0)])

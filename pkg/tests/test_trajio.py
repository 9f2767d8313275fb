import io
import math

import numpy as np
import pytest

from slameval.errors import EmptyAssociationError, ParseError, ValidationError
from slameval.geom3d import Pose, Trajectory
from slameval.trajio import (
    associate,
    associate_by_index,
    dumps_tum,
    load_tum,
    parse_tum,
    save_tum,
    write_tum,
)

from conftest import pose_gap, precise_angle_between, random_pose_trajectory, rotz


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def test_parse_single_identity_pose():
    t = parse_tum("0.0 0 0 0 0 0 0 1")
    assert len(t) == 1
    assert t[0].timestamp == 0.0
    assert t[0] == Pose.identity(0.0)


def test_parse_skips_comments_and_blank_lines():
    t = parse_tum("# comment\n\n1.5 1 2 3 0 0 0 1\n")
    assert len(t) == 1
    assert np.allclose(t[0].translation, [1.0, 2.0, 3.0], atol=0)
    assert t[0].timestamp == 1.5


def test_parse_reorders_quaternion():
    # file order is (qx qy qz qw); w = cos(45deg), z = sin(45deg) is Rz(90)
    t = parse_tum("0 0 0 0 0 0 0.7071068 0.7071068")
    assert precise_angle_between(t[0].rotation, rotz(math.pi / 2)) <= 1e-6


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_tum("0 0 0 0 0 0 0 1\n1.0 1 2 3\n")
    assert err.value.line_no == 2

    with pytest.raises(ParseError) as err:
        parse_tum("# header\n0 0 0 zero 0 0 0 1\n")
    assert err.value.line_no == 2

    # non-increasing timestamps
    with pytest.raises(ParseError) as err:
        parse_tum("1.0 0 0 0 0 0 0 1\n0.5 0 0 0 0 0 0 1\n")
    assert err.value.line_no == 2

    # quaternion norm outside [0.9, 1.1]
    with pytest.raises(ParseError) as err:
        parse_tum("0 0 0 0 0 0 0 2.0")
    assert err.value.line_no == 1


def test_parse_empty_stream_is_rejected():
    with pytest.raises(ValidationError):
        parse_tum("# only a comment\n")


# ---------------------------------------------------------------------------
# Writing and round trip
# ---------------------------------------------------------------------------

def test_write_identity_line_format():
    text = dumps_tum(Trajectory((Pose.identity(0.0),)))
    data_lines = [l for l in text.splitlines() if not l.startswith("#")]
    assert len(data_lines) == 1
    fields = data_lines[0].split()
    assert len(fields) == 8
    assert [float(f) for f in fields] == [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]


def test_round_trip_random_trajectory():
    rng = np.random.default_rng(10)
    t = random_pose_trajectory(rng, 100)
    back = parse_tum(dumps_tum(t))
    assert len(back) == len(t)
    for orig, rec in zip(t, back):
        angle, dist = pose_gap(orig, rec)
        assert angle <= 1e-9
        assert dist <= 1e-9
        assert abs(orig.timestamp - rec.timestamp) <= 1e-9


def test_write_requires_timestamps():
    with pytest.raises(ValidationError):
        dumps_tum(Trajectory((Pose.identity(),)))


def test_write_stream_and_file(tmp_path):
    rng = np.random.default_rng(11)
    t = random_pose_trajectory(rng, 5)
    buf = io.StringIO()
    write_tum(t, buf)
    assert buf.getvalue() == dumps_tum(t)

    path = tmp_path / "traj.txt"
    save_tum(t, path)
    assert load_tum(path).poses == parse_tum(dumps_tum(t)).poses


def test_empty_trajectory_cannot_exist():
    with pytest.raises(ValidationError):
        Trajectory(())


# ---------------------------------------------------------------------------
# Association
# ---------------------------------------------------------------------------

def _stamped(times) -> Trajectory:
    return Trajectory(tuple(Pose.identity(float(ts)) for ts in times))


def test_associate_identical_timestamps():
    gt = _stamped([0.0, 0.1, 0.2, 0.3])
    est = _stamped([0.0, 0.1, 0.2, 0.3])
    assoc = associate(gt, est, 0.02)
    assert assoc.pairs == ((0, 0), (1, 1), (2, 2), (3, 3))


def test_associate_greedy_smallest_difference():
    gt = _stamped([0.00, 0.10])
    est = _stamped([0.011, 0.09])
    assoc = associate(gt, est, 0.02)
    assert assoc.pairs == ((0, 0), (1, 1))


def test_associate_tie_break_is_deterministic_and_symmetric():
    # both gt stamps sit exactly max_diff from the single est stamp;
    # the earlier gt timestamp wins, in either call direction
    gt = _stamped([0.0, 0.2])
    est = _stamped([0.1])
    assert associate(gt, est, 0.1).pairs == ((0, 0),)
    assert associate(est, gt, 0.1).pairs == ((0, 0),)


def test_mixed_timestamps_cannot_associate():
    mixed = Trajectory((Pose.identity(0.0), Pose.identity()))
    assert not mixed.has_timestamps
    assert mixed.timestamps() is None
    with pytest.raises(ValidationError):
        associate(mixed, _stamped([0.0]), 0.02)


def test_associate_disjoint_raises():
    with pytest.raises(EmptyAssociationError):
        associate(_stamped([0.0]), _stamped([1.0]), 0.02)


def test_associate_requires_timestamps():
    unstamped = Trajectory((Pose.identity(),))
    with pytest.raises(ValidationError):
        associate(unstamped, _stamped([0.0]), 0.02)


def test_association_injective_and_bounded():
    rng = np.random.default_rng(12)
    for _ in range(50):
        gt = _stamped(np.sort(rng.uniform(0, 10, size=rng.integers(2, 40))))
        est = _stamped(np.sort(rng.uniform(0, 10, size=rng.integers(2, 40))))
        try:
            assoc = associate(gt, est, 0.1)
        except EmptyAssociationError:
            continue
        gi = [p[0] for p in assoc.pairs]
        ei = [p[1] for p in assoc.pairs]
        assert len(set(gi)) == len(gi)
        assert len(set(ei)) == len(ei)
        assert len(assoc) <= min(len(gt), len(est))
        ts_gt = gt.timestamps()
        ts_est = est.timestamps()
        for a, b in assoc.pairs:
            assert abs(ts_gt[a] - ts_est[b]) <= 0.1
        # sorted by gt timestamp
        assert gi == sorted(gi)


def test_association_symmetric_under_swap():
    rng = np.random.default_rng(13)
    for _ in range(50):
        a = _stamped(np.sort(rng.uniform(0, 5, size=rng.integers(2, 30))))
        b = _stamped(np.sort(rng.uniform(0, 5, size=rng.integers(2, 30))))
        try:
            fwd = associate(a, b, 0.08)
            rev = associate(b, a, 0.08)
        except EmptyAssociationError:
            continue
        assert set(fwd.pairs) == {(j, i) for i, j in rev.pairs}


def test_associate_by_index():
    gt = _stamped([0.0, 0.1, 0.2])
    est = _stamped([5.0, 5.1])  # timestamps far apart on purpose
    assoc = associate_by_index(gt, est)
    assert assoc.pairs == ((0, 0), (1, 1))


def test_parse_is_locale_independent():
    # '.' decimal separator is hard-coded; ',' must fail loudly
    with pytest.raises(ParseError):
        parse_tum("0 0 0 0 0 0 0 1,0")

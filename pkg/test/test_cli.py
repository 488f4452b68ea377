import numpy as np
import pytest

from c2fgrasp.cli import main
from c2fgrasp.data import PointCloud, read_grasps, read_volume, write_grasps, write_ply, write_volume
from c2fgrasp.geometry import GripperGeometry, euler_to_rotmat, symmetric_rotation_distance

from helpers import box_surface, good_set, pose_enclosing


@pytest.fixture
def scene(tmp_path):
    """A single ground-truth grasp and a cloud holding its closing-region center."""
    gripper = GripperGeometry()
    point = np.array([0.1, -0.05, 0.2])
    gt = pose_enclosing(point, euler_to_rotmat((0.3, 0.4, -1.2)), gripper)
    cloud_path, gt_path = str(tmp_path / 'cloud.ply'), str(tmp_path / 'gt.txt')
    write_ply(PointCloud(point[None]), cloud_path)
    write_grasps(good_set([gt]), gt_path)
    return gt, cloud_path, gt_path


def test_help(capsys):
    assert main(['--help']) == 0
    assert 'losscheck' in capsys.readouterr().out
    for command in ('sample', 'encode', 'decode', 'evaluate', 'losscheck', 'perturb'):
        assert main([command, '--help']) == 0


def test_usage_errors(capsys):
    assert main([]) == 1
    assert main(['evaluate', '--unknown']) == 1
    assert 'usage' in capsys.readouterr().err
    # randomized commands need a seed
    assert main(['perturb', '--gt', 'a.txt', '--out', 'b.txt']) == 1


def test_missing_file(tmp_path):
    assert main(['perturb', '--gt', str(tmp_path / 'missing.txt'), '--out', str(tmp_path / 'o.txt'),
                 '--seed', '0']) == 1


def test_encode_decode_round_trip(tmp_path, scene):
    gt, cloud_path, gt_path = scene
    volume_path, positives_path = str(tmp_path / 'target.c2fv'), str(tmp_path / 'positives.txt')
    out_path = str(tmp_path / 'decoded.txt')
    assert main(['encode', '--cloud', cloud_path, '--grasps', gt_path, '--out', volume_path,
                 '--positives', positives_path]) == 0
    assert len(read_volume(volume_path)) == 1
    with open(positives_path) as f:
        assert len(f.read().splitlines()) == 2

    assert main(['decode', '--volume', volume_path, '--out', out_path, '--conf-threshold', '0.5',
                 '--nms']) == 0
    decoded = read_grasps(out_path)
    assert len(decoded) == 1
    pose = decoded.grasps[0]
    assert np.linalg.norm(pose.translation - gt.translation) < 1e-6
    assert symmetric_rotation_distance(pose.rotation, gt.rotation) < 1e-6


def test_encode_subsampling(tmp_path, scene):
    _, cloud_path, gt_path = scene
    out = str(tmp_path / 'target.c2fv')
    args = ['encode', '--cloud', cloud_path, '--grasps', gt_path, '--out', out, '--num-grasp-points', '1']
    assert main(args) == 1
    assert main(args + ['--seed', '3']) == 0


def test_decode_threshold_out_of_range(tmp_path):
    path = str(tmp_path / 'pred.c2fv')
    write_volume([], path)
    assert main(['decode', '--volume', path, '--out', str(tmp_path / 'o.txt'),
                 '--conf-threshold', '1.1']) == 1
    assert main(['decode', '--volume', path, '--out', str(tmp_path / 'o.txt'), '--top-k', '3']) == 0
    assert len(read_grasps(str(tmp_path / 'o.txt'))) == 0


def test_evaluate(tmp_path, scene, capsys):
    _, _, gt_path = scene
    out = str(tmp_path / 'report.txt')
    assert main(['evaluate', '--pred', gt_path, '--gt', gt_path, '--out', out]) == 0
    assert 'ap_hard' in capsys.readouterr().out
    with open(out) as f:
        lines = f.read().splitlines()
    assert lines[:2] == ['ap_hard 1', 'ap_easy 1']

    assert main(['evaluate', '--pred', gt_path, '--pred', gt_path, '--gt', gt_path]) == 1
    assert main(['evaluate', '--pred', gt_path, '--pred', gt_path, '--gt', gt_path, '--gt', gt_path,
                 '--jobs', '2', '--out', out]) == 0
    with open(out) as f:
        assert f.read() == 'ap_hard 1\nap_easy 1\n'


def test_perturb(tmp_path, scene):
    gt, _, gt_path = scene
    out = str(tmp_path / 'noisy.txt')
    assert main(['perturb', '--gt', gt_path, '--out', out, '--sigma-t', '0.001', '--sigma-r', '0.01',
                 '--seed', '5']) == 0
    noisy = read_grasps(out)
    assert len(noisy) == 1
    assert noisy.grasps[0].confidence == 1.0
    assert np.linalg.norm(noisy.grasps[0].translation - gt.translation) < 0.01
    assert main(['perturb', '--gt', gt_path, '--out', out, '--sigma-t', '-1', '--seed', '5']) == 1


def test_losscheck(tmp_path, scene, capsys):
    gt, cloud_path, gt_path = scene
    target = str(tmp_path / 'target.c2fv')
    assert main(['encode', '--cloud', cloud_path, '--grasps', gt_path, '--out', target]) == 0
    args = ['losscheck', '--pred', target, '--target', target, '--seed', '1']
    assert main(args) == 0
    assert 'gradcheck' in capsys.readouterr().out
    assert main(args + ['--tolerance', '1e-300']) == 2
    assert main(args + ['--step', '0.1']) == 1
    assert main(args + ['--alpha', '0']) == 1


def test_sample(tmp_path):
    cloud_path, out = str(tmp_path / 'box.ply'), str(tmp_path / 'grasps.txt')
    write_ply(PointCloud(box_surface(2000, seed=1)), cloud_path)
    args = ['sample', '--cloud', cloud_path, '--out', out, '--seed', '0', '--num-seeds', '20']
    assert main(args) == 0
    labels = read_grasps(out)
    assert labels.source == out
    with open(out) as f:
        first = f.read()
    assert main(args) == 0
    with open(out) as f:
        assert f.read() == first
    assert main(args + ['--roll-steps', '0']) == 1

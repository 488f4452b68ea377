"""Command-line interface.

Exit codes: 0 on success, 1 on bad input (arguments or files), 2 when an
internal check fails.
"""

import sys
import logging
import argparse
import numpy as np

from typing import Optional, Sequence

from . import config
from .codec import encode_labels, TargetSet, DecodeVolume
from .data import (GraspLabelSet, Quality, read_ply, read_grasps, write_grasps,
                   read_volume, write_volume, write_positives)
from .geometry import GripperGeometry
from .get_transform import Compose
from .losses import LossConfig, total_loss, gradcheck
from .metrics import NMS, TopK, GraspAP, evaluate_scenes, perturb_gt, report_lines
from .sampler import SamplerConfig, generate_dataset
from .version import __version__

__all__ = ['main', 'build_parser']

logger = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """Bad arguments print the usage and exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _gripper_parent() -> ArgumentParser:
    parent = ArgumentParser(add_help=False)
    group = parent.add_argument_group('gripper')
    defaults = GripperGeometry()
    group.add_argument('--max-width', type=float, default=defaults.max_width,
                       help='closing width in meters (default: %(default)s)')
    group.add_argument('--finger-depth', type=float, default=defaults.finger_depth,
                       help='closing region depth in meters (default: %(default)s)')
    group.add_argument('--finger-height', type=float, default=defaults.finger_height,
                       help='finger height in meters (default: %(default)s)')
    group.add_argument('--finger-thickness', type=float, default=defaults.finger_thickness,
                       help='finger and palm thickness in meters (default: %(default)s)')
    return parent


def _grid_parent() -> ArgumentParser:
    parent = ArgumentParser(add_help=False)
    n_y, n_z = config.grid_shape()
    parent.add_argument('--n-y', type=int, default=n_y, help='pitch bins (default: %(default)s)')
    parent.add_argument('--n-z', type=int, default=n_z, help='yaw bins (default: %(default)s)')
    return parent


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog='c2fgrasp', description='Coarse-to-fine grasp pose toolkit.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for info, -vv for debug logging')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    gripper, grid = _gripper_parent(), _grid_parent()

    sample = subparsers.add_parser('sample', parents=[gripper],
                                   help='sample labeled ground-truth grasps on a PLY cloud')
    sample.add_argument('--cloud', required=True, help='input PLY cloud')
    sample.add_argument('--out', required=True, help='output grasp file')
    sample.add_argument('--seed', type=int, required=True, help='random seed')
    defaults = SamplerConfig()
    sample.add_argument('--neighbors-k', type=int, default=defaults.neighbors_k,
                        help='neighborhood size for normals and frames (default: %(default)s)')
    sample.add_argument('--num-seeds', type=int, default=defaults.num_seed_points,
                        help='number of seed points (default: %(default)s)')
    sample.add_argument('--roll-steps', type=int, default=defaults.roll_steps,
                        help='rotations about the normal (default: %(default)s)')
    sample.add_argument('--depth-steps', type=int, default=defaults.depth_steps,
                        help='approach offsets (default: %(default)s)')
    sample.add_argument('--mu', type=float, default=defaults.friction_mu,
                        help='friction coefficient (default: %(default)s)')
    sample.add_argument('--min-contacts', type=int, default=defaults.min_contact_points,
                        help='minimum enclosed points (default: %(default)s)')
    sample.add_argument('--contact-tolerance', type=float, default=defaults.contact_tolerance,
                        help='contact band in meters (default: %(default)s)')
    sample.add_argument('--viewpoint', type=float, nargs=3, default=None, metavar=('X', 'Y', 'Z'),
                        help='orient estimated normals toward this point '
                             '(default: away from the centroid)')

    encode = subparsers.add_parser('encode', parents=[gripper, grid],
                                   help='encode ground-truth grasps into target volumes')
    encode.add_argument('--cloud', required=True, help='PLY cloud providing the grasp points')
    encode.add_argument('--grasps', required=True, help='ground-truth grasp file')
    encode.add_argument('--out', required=True, help='output volume file')
    encode.add_argument('--positives', default=None, help='output listing of the positive cells')
    encode.add_argument('--num-grasp-points', type=int, default=None,
                        help='uniformly subsample this many grasp points (needs --seed)')
    encode.add_argument('--seed', type=int, default=None, help='random seed for subsampling')

    decode = subparsers.add_parser('decode', parents=[gripper],
                                   help='decode predicted volumes into ranked grasps')
    decode.add_argument('--volume', required=True, help='input volume file')
    decode.add_argument('--out', required=True, help='output grasp file')
    decode.add_argument('--conf-threshold', type=float, default=0.5,
                        help='minimum cell confidence in [0, 1] (default: %(default)s)')
    decode.add_argument('--nms', action='store_true', help='apply non-maximum suppression')
    decode.add_argument('--top-k', type=int, default=None, help='keep the k most confident grasps')

    evaluate = subparsers.add_parser('evaluate', help='AP_H / AP_E of predicted grasps')
    evaluate.add_argument('--pred', action='append', required=True,
                          help='predicted grasp file, repeat once per scene')
    evaluate.add_argument('--gt', action='append', required=True,
                          help='ground-truth grasp file, repeat once per scene')
    evaluate.add_argument('--jobs', type=int, default=1, help='worker processes (default: %(default)s)')
    evaluate.add_argument('--out', default=None, help='also write `key value` lines here')

    losscheck = subparsers.add_parser('losscheck', help='loss values and a finite-difference gradient check')
    losscheck.add_argument('--pred', required=True, help='predicted volume file')
    losscheck.add_argument('--target', required=True, help='target volume file')
    losscheck.add_argument('--seed', type=int, required=True, help='seed of the gradient check point')
    losscheck.add_argument('--step', type=float, default=1e-6,
                           help='finite-difference step (default: %(default)s)')
    losscheck.add_argument('--tolerance', type=float, default=1e-5,
                           help='fail when the relative error exceeds this (default: %(default)s)')
    loss_defaults = LossConfig()
    for name in ('alpha', 'gamma', 'lambda_x', 'lambda_y', 'lambda_z', 'lambda_cls', 'lambda_rot'):
        losscheck.add_argument(f"--{name.replace('_', '-')}", type=float,
                               default=getattr(loss_defaults, name), dest=name,
                               help='(default: %(default)s)')

    perturb = subparsers.add_parser('perturb', help='noisy ranked predictions from ground truth')
    perturb.add_argument('--gt', required=True, help='ground-truth grasp file')
    perturb.add_argument('--out', required=True, help='output grasp file')
    perturb.add_argument('--sigma-t', type=float, default=0.0, help='translation noise in meters')
    perturb.add_argument('--sigma-r', type=float, default=0.0, help='rotation noise in radians')
    perturb.add_argument('--seed', type=int, required=True, help='random seed')
    return parser


def _gripper(args) -> GripperGeometry:
    return GripperGeometry(args.max_width, args.finger_depth, args.finger_height, args.finger_thickness)


def _all_good(poses) -> GraspLabelSet:
    return GraspLabelSet(poses, [Quality.GOOD] * len(poses))


def _run_sample(args) -> int:
    cfg = SamplerConfig(neighbors_k=args.neighbors_k, num_seed_points=args.num_seeds,
                        roll_steps=args.roll_steps, depth_steps=args.depth_steps,
                        friction_mu=args.mu, min_contact_points=args.min_contacts,
                        rng_seed=args.seed, contact_tolerance=args.contact_tolerance)
    cloud = read_ply(args.cloud)
    labels = generate_dataset(cloud, _gripper(args), cfg, viewpoint=args.viewpoint,
                              source=args.cloud, verbose=args.verbose > 0)
    write_grasps(labels, args.out)
    print(f"{labels.num_good} good, {labels.num_bad} bad grasp(s) -> {args.out}")
    return 0


def _run_encode(args) -> int:
    points = read_ply(args.cloud).points
    if args.num_grasp_points is not None:
        if args.seed is None:
            raise ValueError("--num-grasp-points needs --seed.")
        if args.num_grasp_points < 1:
            raise ValueError(f"--num-grasp-points must be positive, but got {args.num_grasp_points}.")
        rng = np.random.default_rng(args.seed)
        size = min(args.num_grasp_points, points.shape[0])
        points = points[np.sort(rng.choice(points.shape[0], size=size, replace=False))]
    gt = read_grasps(args.grasps)
    targets = encode_labels(points, gt, _gripper(args), args.n_y, args.n_z)
    write_volume(targets.volumes, args.out)
    if args.positives:
        write_positives(targets, args.positives)
    print(f"{len(targets)} positive cell(s) over {targets.num_points} grasp point(s) -> {args.out}")
    return 0


def _run_decode(args) -> int:
    if not 0.0 <= args.conf_threshold <= 1.0:
        raise ValueError(f"--conf-threshold must lie in [0, 1], but got {args.conf_threshold}.")
    pipeline = Compose(DecodeVolume(_gripper(args), args.conf_threshold))
    if args.nms:
        pipeline.add(NMS())
    if args.top_k is not None:
        if args.top_k < 1:
            raise ValueError(f"--top-k must be positive, but got {args.top_k}.")
        pipeline.add(TopK(args.top_k))
    logger.debug(f"Decode pipeline: {pipeline}")
    poses = pipeline(read_volume(args.volume))
    write_grasps(_all_good(poses), args.out)
    print(f"{len(poses)} grasp(s) -> {args.out}")
    return 0


def _run_evaluate(args) -> int:
    if len(args.pred) != len(args.gt):
        raise ValueError(f"Got {len(args.pred)} --pred file(s) but {len(args.gt)} --gt file(s).")
    scenes = [(read_grasps(pred).grasps, read_grasps(gt)) for pred, gt in zip(args.pred, args.gt)]
    reports = evaluate_scenes(scenes, jobs=args.jobs, verbose=args.verbose > 0)
    metric = GraspAP()
    for pred, report in zip(args.pred, reports):
        metric.update_from_report(report)
        print(f"== {pred}")
        print(report.show())
    result = metric.result()
    if len(reports) > 1:
        print(f"== mean over {len(reports)} scenes")
        print(f"ap_hard {result['ap_hard']:.6f}\nap_easy {result['ap_easy']:.6f}")
    if args.out:
        with open(args.out, 'w') as f:
            if len(reports) == 1:
                f.write(report_lines(reports[0]))
            else:
                f.write(f"ap_hard {result['ap_hard']:.17g}\nap_easy {result['ap_easy']:.17g}\n")
    return 0


def _run_losscheck(args) -> int:
    cfg = LossConfig(args.alpha, args.gamma, args.lambda_x, args.lambda_y, args.lambda_z,
                     args.lambda_cls, args.lambda_rot)
    pred = read_volume(args.pred)
    targets = TargetSet.from_volumes(read_volume(args.target))
    report = total_loss(pred, targets, cfg)
    error = gradcheck(pred, targets, cfg, step=args.step, seed=args.seed)
    print(report.show())
    print(f"gradcheck max relative error {error:.3e}")
    if not error < args.tolerance:
        raise RuntimeError(f"Gradient check failed: {error:.3e} >= {args.tolerance:.3e}.")
    return 0


def _run_perturb(args) -> int:
    gt = read_grasps(args.gt)
    poses = perturb_gt(gt, args.sigma_t, args.sigma_r, args.seed)
    write_grasps(_all_good(poses), args.out)
    print(f"{len(poses)} grasp(s) -> {args.out}")
    return 0


_COMMANDS = {'sample': _run_sample,
             'encode': _run_encode,
             'decode': _run_decode,
             'evaluate': _run_evaluate,
             'losscheck': _run_losscheck,
             'perturb': _run_perturb}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1

    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as e:
        logger.error(str(e))
        return 1
    except (AssertionError, RuntimeError) as e:
        logger.error(f"internal check failed: {e}")
        return 2

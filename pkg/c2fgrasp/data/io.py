"""Readers and writers for point clouds, grasp label files and C2F volume files.

All writers are deterministic: floats are printed with 17 significant digits
in text formats and stored as little-endian float32 in volume files.
"""

import os
import errno
import struct
import logging
import os.path as osp
import numpy as np

from typing import List, Optional, Sequence, Tuple

from .label_set import GraspLabelSet, Quality
from .point_cloud import PointCloud
from .volume import C2FVolume, NUM_CHANNELS, unstack_volumes
from .. import config
from ..errors import ParseError
from ..geometry.euler import EulerAngles
from ..geometry.pose import GraspPose

__all__ = [
    'makedirs', 'makedirs_from_filepath', 'read_ply', 'write_ply', 'read_grasps',
    'write_grasps', 'read_volume', 'write_volume', 'write_positives',
    'VOLUME_MAGIC', 'VOLUME_VERSION'
]

logger = logging.getLogger(__name__)

VOLUME_MAGIC = b"C2FV"
VOLUME_VERSION = 1
# magic, version, num_points, n_y, n_z, channels
_VOLUME_HEADER = struct.Struct('<4sIIIII')
_FLOAT = np.dtype('<f4')

_GRASP_HEADER = "# x y z r_x r_y r_z quality confidence\n"


def makedirs(path: str) -> None:
    try:
        os.makedirs(osp.expanduser(osp.normpath(path)), exist_ok=True)
    except OSError as e:
        if e.errno != errno.EEXIST and osp.isdir(path):
            raise e


def makedirs_from_filepath(filepath: str) -> None:
    folder = osp.dirname(osp.realpath(osp.expanduser(filepath)))
    makedirs(folder)


############################ PLY ##############################

def _parse_ply_header(lines: List[str], path: str) -> Tuple[int, List[str], int]:
    """Return (vertex count, vertex property names, index of the first body line)."""
    if not lines or lines[0].strip() != "ply":
        raise ParseError("missing 'ply' magic line", path, 1)

    num_vertices = None
    properties: List[str] = []
    current = None
    for ix, raw in enumerate(lines[1:], start=2):
        tokens = raw.split()
        if not tokens or tokens[0] in ('comment', 'obj_info'):
            continue
        keyword = tokens[0]
        if keyword == 'format':
            if len(tokens) < 2 or tokens[1] != 'ascii':
                raise ParseError(f"unsupported PLY format '{' '.join(tokens[1:])}', only ascii is supported",
                                 path, ix)
        elif keyword == 'element':
            if len(tokens) != 3:
                raise ParseError("malformed element line", path, ix)
            current = tokens[1]
            if current == 'vertex':
                if num_vertices is not None:
                    raise ParseError("duplicate vertex element", path, ix)
                try:
                    num_vertices = int(tokens[2])
                except ValueError:
                    raise ParseError(f"invalid vertex count '{tokens[2]}'", path, ix) from None
                if num_vertices < 0:
                    raise ParseError(f"invalid vertex count '{tokens[2]}'", path, ix)
            elif num_vertices is None:
                raise ParseError(f"element '{current}' before the vertex element is not supported",
                                 path, ix)
        elif keyword == 'property':
            if current is None:
                raise ParseError("property outside of an element", path, ix)
            if current == 'vertex':
                if len(tokens) != 3 or tokens[1] == 'list':
                    raise ParseError("only scalar vertex properties are supported", path, ix)
                properties.append(tokens[2])
        elif keyword == 'end_header':
            if num_vertices is None:
                raise ParseError("no vertex element in header", path, ix)
            return num_vertices, properties, ix
        else:
            raise ParseError(f"unknown header keyword '{keyword}'", path, ix)
    raise ParseError("missing 'end_header'", path, len(lines))


def read_ply(path: str) -> PointCloud:
    """Read an ASCII PLY file into a `PointCloud`.

    Vertex properties other than x/y/z and nx/ny/nz are ignored. Normals are
    re-normalized; zero-length normals are kept but flagged invalid.

    Raises:
    ----------
    ParseError: on malformed headers, short bodies or non-finite values,
        naming the offending line.
    """
    with open(path, 'r') as f:
        lines = f.read().splitlines()
    num_vertices, properties, header_end = _parse_ply_header(lines, path)
    for name in ('x', 'y', 'z'):
        if name not in properties:
            raise ParseError(f"vertex property '{name}' is missing", path, header_end)
    columns = [properties.index(name) for name in ('x', 'y', 'z')]
    has_normals = all(name in properties for name in ('nx', 'ny', 'nz'))
    if has_normals:
        columns += [properties.index(name) for name in ('nx', 'ny', 'nz')]

    body = lines[header_end:header_end + num_vertices]
    if len(body) < num_vertices:
        raise ParseError(f"header declares {num_vertices} vertices but the body has only {len(body)}",
                         path, len(lines))
    data = np.empty((num_vertices, len(columns)), dtype=np.float64)
    for row, raw in enumerate(body):
        lineno = header_end + row + 1
        tokens = raw.split()
        if len(tokens) != len(properties):
            raise ParseError(f"expected {len(properties)} values, got {len(tokens)}", path, lineno)
        try:
            values = [float(tokens[c]) for c in columns]
        except ValueError:
            raise ParseError("unparsable number", path, lineno) from None
        if not np.all(np.isfinite(values)):
            raise ParseError("non-finite value", path, lineno)
        data[row] = values

    points = data[:, :3]
    if not has_normals:
        return PointCloud(points)
    normals = data[:, 3:]
    lengths = np.linalg.norm(normals, axis=1)
    valid = lengths > 0
    normals[valid] /= lengths[valid, None]
    if not valid.all():
        logger.warning(f"{path}: {int((~valid).sum())} zero-length normal(s) flagged invalid.")
    return PointCloud(points, normals, valid)


def write_ply(cloud: PointCloud, path: str) -> None:
    """Write `cloud` as ASCII PLY with double precision coordinates."""
    makedirs_from_filepath(path)
    names = ['x', 'y', 'z']
    data = cloud.points
    if cloud.has_normals:
        names += ['nx', 'ny', 'nz']
        data = np.hstack([cloud.points, cloud.normals])
    with open(path, 'w') as f:
        f.write('ply\n')
        f.write('format ascii 1.0\n')
        f.write(f'element vertex {len(cloud):d}\n')
        for name in names:
            f.write(f'property double {name}\n')
        f.write('end_header\n')
        if len(cloud):
            np.savetxt(f, data, fmt='%.17g')


############################ Grasps ##############################

def read_grasps(path: str, source: Optional[str] = None) -> GraspLabelSet:
    """Read a grasp label file.

    One grasp per line: ``x y z r_x r_y r_z quality [confidence]``, any further
    fields ignored; `#` starts a comment. Quality tokens are the exact lowercase
    `good` or `bad`. Angles are brought into their canonical ranges on load.
    """
    grasps, labels = [], []
    with open(path, 'r') as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if len(tokens) < 7:
                raise ParseError(f"expected at least 7 fields, got {len(tokens)}", path, lineno)
            try:
                values = [float(v) for v in tokens[:6]]
                confidence = float(tokens[7]) if len(tokens) > 7 else 1.0
            except ValueError:
                raise ParseError("unparsable number", path, lineno) from None
            try:
                quality = Quality.parse(tokens[6])
                pose = GraspPose.from_euler(EulerAngles(*values[3:]), values[:3], confidence)
            except ValueError as e:
                raise ParseError(str(e), path, lineno) from None
            grasps.append(pose.canonical())
            labels.append(quality)
    return GraspLabelSet(grasps, labels, source=source if source is not None else path)


def _format_grasp(pose: GraspPose, quality: Quality) -> str:
    pose = pose.canonical()
    e = pose.euler
    values = (*pose.translation, e.r_x, e.r_y, e.r_z)
    fields = [f"{v:.17g}" for v in values] + [quality.value, f"{pose.confidence:.17g}"]
    return " ".join(fields) + "\n"


def write_grasps(grasps: GraspLabelSet, path: str) -> None:
    makedirs_from_filepath(path)
    with open(path, 'w') as f:
        f.write(_GRASP_HEADER)
        for pose, quality in grasps:
            f.write(_format_grasp(pose, quality))


############################ Volumes ##############################

def write_volume(volumes: Sequence[C2FVolume], path: str) -> None:
    """Write volumes as header + grasp points + cells, all little-endian."""
    volumes = list(volumes)
    if volumes:
        n_y, n_z = volumes[0].n_y, volumes[0].n_z
    else:
        n_y, n_z = config.grid_shape()
    for ix, volume in enumerate(volumes):
        if (volume.n_y, volume.n_z) != (n_y, n_z):
            raise ValueError(
                f"Volume shapes don't agree: expected ({n_y}, {n_z}), but the {ix}-th is {volume.shape}.")
    points = np.array([v.grasp_point for v in volumes], dtype=_FLOAT).reshape(-1, 3)
    cells = np.array([v.cells for v in volumes], dtype=_FLOAT).reshape(-1, n_y, n_z, NUM_CHANNELS)
    makedirs_from_filepath(path)
    with open(path, 'wb') as f:
        f.write(_VOLUME_HEADER.pack(VOLUME_MAGIC, VOLUME_VERSION, len(volumes), n_y, n_z,
                                    NUM_CHANNELS))
        f.write(points.tobytes())
        f.write(cells.tobytes())


def read_volume(path: str) -> List[C2FVolume]:
    """Read a volume file written by `write_volume`.

    Raises:
    ----------
    ParseError: on a bad magic, version or channel count, and on truncated or
        oversized payloads.
    """
    with open(path, 'rb') as f:
        blob = f.read()
    if len(blob) < _VOLUME_HEADER.size:
        raise ParseError(f"truncated header ({len(blob)} bytes)", path)
    magic, version, num_points, n_y, n_z, channels = _VOLUME_HEADER.unpack_from(blob)
    if magic != VOLUME_MAGIC:
        raise ParseError(f"bad magic {magic!r}, expected {VOLUME_MAGIC!r}", path)
    if version != VOLUME_VERSION:
        raise ParseError(f"unsupported version {version}, expected {VOLUME_VERSION}", path)
    if channels != NUM_CHANNELS:
        raise ParseError(f"expected {NUM_CHANNELS} channels, got {channels}", path)
    if n_y < 1 or n_z < 1:
        raise ParseError(f"invalid grid shape ({n_y}, {n_z})", path)

    num_floats = num_points * 3 + num_points * n_y * n_z * channels
    expected = _VOLUME_HEADER.size + num_floats * _FLOAT.itemsize
    if len(blob) < expected:
        raise ParseError(f"truncated payload: expected {expected} bytes, got {len(blob)}", path)
    if len(blob) > expected:
        raise ParseError(f"{len(blob) - expected} unexpected trailing bytes", path)

    payload = np.frombuffer(blob, dtype=_FLOAT, offset=_VOLUME_HEADER.size)
    points = payload[:num_points * 3].reshape(num_points, 3)
    cells = payload[num_points * 3:].reshape(num_points, n_y, n_z, channels)
    return unstack_volumes(points, cells)


def write_positives(targets, path: str) -> None:
    """Write the positive set of a `TargetSet` as a text listing."""
    makedirs_from_filepath(path)
    with open(path, 'w') as f:
        targets.write_positives(f)

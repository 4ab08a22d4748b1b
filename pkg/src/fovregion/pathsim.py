"""Path simulation and visibility-aware planning on Plane H.

The robot base moves on the ground (z = 0) while the camera rides at
height h_c; margins along a trajectory come from the brute-force best-pose
search, and region flags from the analytic RNH/RNV/RNA membership.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .camera import best_margins_batch
from .errors import Unreachable
from .regions import RnaRegion
from .scene import Scene

DEFAULT_SPEED = 0.5       # m/s
DEFAULT_CLEARANCE = 0.05  # m


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Piecewise-linear path: waypoints (t, position), t strictly increasing,
    positions on the ground plane z = 0."""

    times: np.ndarray      # (M,)
    positions: np.ndarray  # (M, 3)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        p = np.atleast_2d(np.asarray(self.positions, dtype=float))
        if len(t) != len(p) or len(t) < 1:
            raise ValueError("waypoint times and positions must match and be non-empty")
        if np.any(np.diff(t) <= 0):
            raise ValueError("waypoint times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", p)

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def sample(self, t):
        """Linear interpolation, clamped to the endpoints."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        x = np.interp(t, self.times, self.positions[:, 0])
        y = np.interp(t, self.times, self.positions[:, 1])
        z = np.interp(t, self.times, self.positions[:, 2])
        return np.column_stack([x, y, z])


def trajectory_from_waypoints(points, speed: float = DEFAULT_SPEED,
                              t0: float = 0.0) -> Trajectory:
    """Constant-speed timing over a polyline of ground positions."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] == 2:
        pts = np.column_stack([pts, np.zeros(len(pts))])
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    times = t0 + np.concatenate([[0.0], np.cumsum(seg / speed)])
    # collapse zero-length segments without changing shape
    for i in range(1, len(times)):
        if times[i] <= times[i - 1]:
            times[i] = times[i - 1] + 1e-9
    return Trajectory(times=times, positions=pts)


@dataclass(frozen=True)
class TraceRecord:
    t: float
    position: np.ndarray    # robot base, z = 0
    left: float
    right: float
    top: float
    bottom: float
    in_rnh: bool
    in_rnv: bool
    in_rna: bool

    @property
    def min_margin(self) -> float:
        return min(self.left, self.right, self.top, self.bottom)


def simulate(traj: Trajectory, scene: Scene, rna: RnaRegion, dt: float,
             grid: int = 64):
    """Sample the trajectory at dt; best-pose margins and region flags
    per sample."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    n = int(math.floor((traj.t_end - traj.times[0]) / dt)) + 1
    ts = traj.times[0] + dt * np.arange(n)
    if ts[-1] < traj.t_end - 1e-12:
        ts = np.append(ts, traj.t_end)
    base = traj.sample(ts)
    cam_pos = base.copy()
    cam_pos[:, 2] = scene.camera.h_c
    points = scene.all_points()
    _, _, margins = best_margins_batch(cam_pos, points, scene.camera, grid=grid)
    in_rnh = rna.rnh.contains_many(cam_pos)
    if rna.rnv is not None and rna.rnv.exists:
        in_rnv = rna.rnv.contains_many(cam_pos)
    else:
        in_rnv = np.zeros(len(cam_pos), dtype=bool)
    in_rna = in_rnh | in_rnv
    records = []
    for i, t in enumerate(ts):
        records.append(TraceRecord(
            t=float(t), position=base[i],
            left=float(margins[i, 0]), right=float(margins[i, 1]),
            top=float(margins[i, 2]), bottom=float(margins[i, 3]),
            in_rnh=bool(in_rnh[i]), in_rnv=bool(in_rnv[i]), in_rna=bool(in_rna[i])))
    return records


def write_trace_csv(records, path) -> None:
    """CSV trace: one row per sample, floats at 6 significant digits."""
    cols = "t,x,y,dist_left,dist_right,dist_top,dist_bottom,in_rnh,in_rnv,in_rna"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(cols + "\n")
        for r in records:
            fh.write("%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%d,%d,%d\n" % (
                r.t, r.position[0], r.position[1],
                r.left, r.right, r.top, r.bottom,
                int(r.in_rnh), int(r.in_rnv), int(r.in_rna)))


def _visible_2d(a, b, blocked) -> bool:
    from shapely.geometry import LineString

    seg = LineString([tuple(a), tuple(b)])
    return not seg.intersects(blocked)


def plan_boundary_path(start, goal, rna: RnaRegion, clearance: float = DEFAULT_CLEARANCE,
                       speed: float = DEFAULT_SPEED, arc_tol: float = 1e-3) -> Trajectory:
    """Shortest path from start to goal avoiding the clearance-inflated RNA.

    Builds a visibility graph over the inflated region's boundary vertices
    and runs Dijkstra. Start/goal are ground (x, y) positions.
    """
    from shapely.geometry import Point

    s = np.asarray(start, dtype=float)[:2]
    g = np.asarray(goal, dtype=float)[:2]
    region = rna.shapely_polygon(arc_tol)
    if region.is_empty:
        return trajectory_from_waypoints([s, g], speed=speed)
    inflated = region.buffer(clearance, quad_segs=16)
    inflated = inflated.simplify(arc_tol, preserve_topology=True).buffer(0)
    if inflated.contains(Point(*s)) or inflated.contains(Point(*g)):
        raise Unreachable("start or goal lies inside the inflated no-go region")
    # interior used for blocking tests: touching the boundary is allowed
    blocked = inflated.buffer(-1e-6)

    nodes = [s, g]
    geoms = [inflated] if inflated.geom_type == "Polygon" else list(inflated.geoms)
    for geom in geoms:
        coords = np.asarray(geom.exterior.coords)[:-1]
        nodes.extend(coords)
    nodes = np.asarray(nodes)
    n = len(nodes)

    if _visible_2d(nodes[0], nodes[1], blocked):
        return trajectory_from_waypoints([s, g], speed=speed)

    adj = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if _visible_2d(nodes[i], nodes[j], blocked):
                w = float(np.linalg.norm(nodes[i] - nodes[j]))
                adj[i].append((j, w))
                adj[j].append((i, w))

    dist = np.full(n, np.inf)
    prev = np.full(n, -1, dtype=int)
    dist[0] = 0.0
    heap = [(0.0, 0)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u] + 1e-12:
            continue
        if u == 1:
            break
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v] - 1e-12:
                dist[v] = nd
                prev[v] = u
                heapq.heappush(heap, (nd, v))
    if not np.isfinite(dist[1]):
        raise Unreachable("no collision-free path between start and goal")
    path = [1]
    while path[-1] != 0:
        path.append(int(prev[path[-1]]))
    waypoints = nodes[path[::-1]]
    return trajectory_from_waypoints(waypoints, speed=speed)

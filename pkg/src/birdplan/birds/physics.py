"""Closed-form ballistics and the two-body collision rule used by the domain."""

import math

from ..core import PlanningError


class CoincidentCenters(PlanningError, ValueError):
    pass


def collide_bird_pig(v_b, v_p, x_b, x_p, m_b, m_p):
    """Bird velocity after an elastic hit on a pig (angle-free form).

    v' = v_b - 2 m_p / (m_b + m_p) * <v_b - v_p, x_b - x_p> / |x_b - x_p|^2 * (x_b - x_p)
    """
    dx = x_b[0] - x_p[0]
    dy = x_b[1] - x_p[1]
    n2 = dx * dx + dy * dy
    if n2 == 0:
        raise CoincidentCenters("bird and pig centres coincide")
    dot = (v_b[0] - v_p[0]) * dx + (v_b[1] - v_p[1]) * dy
    coef = (2 * m_p / (m_b + m_p)) * (dot / n2)
    return (v_b[0] - coef * dx, v_b[1] - coef * dy)


def direct_shot_angles(origin, target, v, g):
    """Launch angles ``(low, high)`` whose ballistic arc passes through
    ``target``, or ``None`` when the target is out of range."""
    if v <= 0 or g <= 0:
        raise ValueError("speed and gravity must be positive")
    dx = target[0] - origin[0]
    dy = target[1] - origin[1]
    if dx <= 0:
        return None
    v2 = v * v
    disc = v2 * v2 - g * (g * dx * dx + 2 * dy * v2)
    if disc < 0:
        return None
    root = math.sqrt(disc)
    low = math.atan2(v2 - root, g * dx)
    high = math.atan2(v2 + root, g * dx)
    return (low, high)


def ballistic_y(x0, y0, vx, vy, g, x):
    """Height of the exact (drag-free) arc at abscissa ``x``; needs ``vx > 0``."""
    u = x - x0
    return y0 + (vy / vx) * u - g * u * u / (2 * vx * vx)

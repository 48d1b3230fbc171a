"""Seeded level generator for the nine benchmark layouts.

Each template encodes one layout motif; positions, sizes and materials are
drawn from a generator seeded by ``(template, seed)``, so a pair always
produces the same level.  Filler blocks behind the target zone bring the
object count into the template's range.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..birds.level import Bird, Block, LevelDescription, Pig, Platform

MATERIAL_PROPS = {
    # density (kg/m^2), life, stability
    "wood": (2.0, 20.0, 8.0),
    "ice": (1.0, 8.0, 4.0),
    "stone": (8.0, 80.0, 60.0),
    "tnt": (1.5, 5.0, 5.0),
}


@dataclass(frozen=True)
class TemplateSpec:
    template_id: int
    min_objects: int
    max_objects: int
    birds: int
    motif: str

    @property
    def simple(self):
        return self.template_id != 55


TEMPLATES = {
    22: TemplateSpec(22, 7, 11, 1, "pig under a roof: needs a low shot"),
    25: TemplateSpec(25, 8, 12, 1, "pig behind a wall: needs a high shot"),
    36: TemplateSpec(36, 8, 12, 1, "shielded pig on a wooden column, TNT out of reach"),
    45: TemplateSpec(45, 9, 13, 1, "two pigs under a low roof, TNT beside them"),
    46: TemplateSpec(46, 11, 15, 2, "two exposed pigs, decoy TNT"),
    53: TemplateSpec(53, 10, 14, 1, "pig in a closed box, TNT tucked behind it"),
    54: TemplateSpec(54, 8, 12, 1, "pig in a pit with a far stone wall"),
    57: TemplateSpec(57, 11, 15, 1, "pig in a stone box, TNT on the ground beside it"),
    55: TemplateSpec(55, 29, 138, 3, "several towers with pigs, TNT and ledges"),
}
SIMPLE_TEMPLATES = (22, 25, 36, 45, 46, 53, 54, 57)


def block(x, y_bottom, w, h, material="wood", supports=()):
    density, life, stability = MATERIAL_PROPS[material]
    return Block(x_block=x, y_block=y_bottom + h / 2, block_width=w, block_height=h,
                 block_mass=density * w * h, material=material, life=life,
                 stability=stability, supports=list(supports))


def platform(x_left, x_right, y_bottom, y_top):
    return Platform(x_platform=(x_left + x_right) / 2, y_platform=(y_bottom + y_top) / 2,
                    platform_width=x_right - x_left, platform_height=y_top - y_bottom)


def ground_pig(x, r=0.5, y_bottom=0.0):
    return Pig(x_pig=x, y_pig=y_bottom + r, r_pig=r, m_pig=1.0)


class _Builder:
    def __init__(self, rng):
        self.rng = rng
        self.pigs, self.blocks, self.platforms = [], [], []

    def add_block(self, *a, **kw):
        self.blocks.append(block(*a, **kw))
        return f"k{len(self.blocks) - 1}"

    def add_pig(self, pig):
        self.pigs.append(pig)
        return f"p{len(self.pigs) - 1}"

    def add_platform(self, *a):
        self.platforms.append(platform(*a))

    def count(self, birds):
        return birds + len(self.pigs) + len(self.blocks) + len(self.platforms)

    def fill(self, spec, x_from, x_to):
        """Add small stacks on the ground in [x_from, x_to] until a random
        object count inside the template's range is reached."""
        rng = self.rng
        target = rng.randint(spec.min_objects, spec.max_objects)
        x = x_from
        while self.count(spec.birds) < target:
            w = rng.choice((0.5, 1.0))
            h = rng.choice((0.5, 1.0, 1.5))
            mat = rng.choice(("wood", "ice", "wood", "stone"))
            below = None
            height = 0.0
            for _ in range(rng.randint(1, 3)):
                if self.count(spec.birds) >= target:
                    break
                below_id = self.add_block(x, height, w, h, mat)
                if below is not None:
                    self.blocks[int(below[1:])].supports.append(below_id)
                below = below_id
                height += h
            x += w + rng.uniform(0.5, 1.5)
            if x > x_to:
                x = x_from + rng.uniform(0.0, 0.5)


# Walls and roofs are 1 m thick: with the bird's 0.6 m diameter the
# overlap zone is wider than one planning step at full speed, so the coarse
# planner cannot tunnel through obstacles the executor would hit.
WALL = 1.0


def _t22(b, rng):
    px = rng.uniform(18.0, 28.0)
    b.add_pig(ground_pig(px))
    roof_y = rng.uniform(3.2, 4.2)
    b.add_platform(px - rng.uniform(2.5, 4.0), px + rng.uniform(1.5, 2.5), roof_y, roof_y + WALL)
    b.add_block(px + 1.5, 0.0, 0.5, 1.0, "wood")
    return px


def _t25(b, rng):
    px = rng.uniform(18.0, 28.0)
    b.add_pig(ground_pig(px))
    wall_h = rng.uniform(3.5, 5.0)
    gap = rng.uniform(2.2, 3.0)
    b.add_platform(px - gap - WALL, px - gap, 0.0, wall_h)
    b.add_block(px + 1.5, 0.0, 0.5, 1.5, "ice")
    return px


def _t36(b, rng):
    cx = rng.uniform(18.0, 26.0)
    col_h = rng.uniform(2.5, 3.5)
    col = b.add_block(cx, 0.0, 1.0, col_h, rng.choice(("wood", "ice")))
    pig = b.add_pig(ground_pig(cx, y_bottom=col_h))
    b.blocks[int(col[1:])].supports.append(pig)
    b.add_platform(cx - 1.0 - WALL, cx - 1.0, col_h - 0.3, col_h + 2.0)
    b.add_platform(cx - 1.0 - WALL, cx + 1.6, col_h + 2.0, col_h + 2.0 + WALL)
    b.add_block(cx - rng.uniform(7.0, 10.0), 0.0, 1.0, 1.0, "tnt")
    return cx


def _t45(b, rng):
    cx = rng.uniform(29.0, 35.0)
    b.add_pig(ground_pig(cx - 0.6))
    b.add_pig(ground_pig(cx + 0.6))
    roof = rng.uniform(1.8, 2.2)
    b.add_platform(cx - 1.3, cx + 1.3 + WALL, roof, roof + WALL)
    # TNT sits on the approach, close enough to reach both pigs
    b.add_block(cx - 2.05, 0.0, 1.5, 1.5, "tnt")
    return cx + 1.3 + WALL


def _t46(b, rng):
    x1 = rng.uniform(15.0, 19.0)
    b.add_pig(ground_pig(x1))
    x2 = x1 + rng.uniform(7.0, 10.0)
    b.add_pig(ground_pig(x2))
    b.add_block(x1 - rng.uniform(5.0, 7.0), 0.0, 1.0, 1.0, "tnt")
    b.add_block(x1 + 1.2, 0.0, 0.5, 1.0, "wood")
    b.add_platform(x2 + 1.0, x2 + 1.0 + WALL, 0.0, rng.uniform(2.0, 3.0))
    return x2 + 1.0 + WALL


def _t53(b, rng):
    px = rng.uniform(18.0, 24.0)
    b.add_pig(ground_pig(px))
    top = rng.uniform(1.2, 1.5)
    b.add_platform(px - 0.7 - WALL, px - 0.7, 0.0, top)
    b.add_platform(px + 0.7, px + 0.7 + WALL, 0.0, top)
    b.add_platform(px - 0.7 - WALL, px + 0.7 + WALL, top, top + WALL)
    # tucked in behind the box: only a steep drop reaches it
    b.add_block(px + 0.7 + WALL + 0.1 + 0.75, 0.0, 1.5, 1.5, "tnt")
    return px + 3.5


def _t54(b, rng):
    px = rng.uniform(18.0, 26.0)
    b.add_pig(ground_pig(px))
    b.add_platform(px - 1.3 - WALL, px - 1.3, 0.0, rng.uniform(1.6, 2.2))
    b.add_block(px + rng.uniform(2.0, 2.8), 0.0, 1.0, rng.uniform(5.0, 6.5), "stone")
    return px + 3.5


def _t57(b, rng):
    px = rng.uniform(29.0, 35.0)
    b.add_pig(ground_pig(px))
    b.add_block(px - 0.9 - WALL / 2, 0.0, WALL, 1.2, "stone")
    b.add_block(px + 0.9 + WALL / 2, 0.0, WALL, 1.2, "stone")
    b.add_block(px, 1.2, 1.8 + 2 * WALL, WALL, "stone")
    tnt_x = px - 0.9 - WALL - rng.uniform(0.1, 0.4) - 0.75
    b.add_block(tnt_x, 0.0, 1.5, 1.5, "tnt")
    return px + 2.0


def _tower(b, rng, x, tnt_ok=True):
    floors = rng.randint(1, 3)
    height = 0.0
    lower = []
    for _ in range(floors):
        mat = rng.choice(("wood", "ice", "stone", "wood"))
        h = rng.uniform(1.0, 2.0)
        left = b.add_block(x - 0.8, height, 0.4, h, mat)
        right = b.add_block(x + 0.8, height, 0.4, h, mat)
        for s in lower:
            b.blocks[int(s[1:])].supports.extend([left, right])
        height += h
        plank = b.add_block(x, height, 2.2, 0.3, rng.choice(("wood", "ice")))
        b.blocks[int(left[1:])].supports.append(plank)
        b.blocks[int(right[1:])].supports.append(plank)
        height += 0.3
        lower = [plank]
        if rng.random() < 0.5:
            pig = b.add_pig(ground_pig(x, y_bottom=height, r=0.45))
            b.blocks[int(plank[1:])].supports.append(pig)
    if tnt_ok and rng.random() < 0.3:
        b.add_block(x + 1.6, 0.0, 0.8, 0.8, "tnt")
    return height


def _t55(b, rng):
    x = rng.uniform(14.0, 17.0)
    towers = rng.randint(3, 6)
    for _ in range(towers):
        _tower(b, rng, x)
        x += rng.uniform(3.0, 4.5)
    if not b.pigs:
        b.add_pig(ground_pig(x))
    if rng.random() < 0.5:
        ly = rng.uniform(4.0, 6.0)
        b.add_platform(x, x + 2.0, ly - 0.4, ly)
        b.add_pig(ground_pig(x + 1.0, y_bottom=ly))
    return x


_BUILDERS = {22: _t22, 25: _t25, 36: _t36, 45: _t45, 46: _t46, 53: _t53, 54: _t54, 57: _t57, 55: _t55}


def generate_level(template, seed: int) -> LevelDescription:
    spec = template if isinstance(template, TemplateSpec) else TEMPLATES[int(template)]
    rng = random.Random(f"level:{spec.template_id}:{seed}")
    b = _Builder(rng)
    x_end = _BUILDERS[spec.template_id](b, rng)
    b.fill(spec, x_end + 3.0, x_end + 12.0)
    birds = [Bird(bird_id=i, bird_type="red", m_bird=1.0, radius=0.3, v_max=20.0)
             for i in range(spec.birds)]
    lv = LevelDescription(slingshot=(0.0, 1.5), gravity=9.8, ground_damper=0.4,
                          birds=birds, pigs=b.pigs, blocks=b.blocks, platforms=b.platforms,
                          name=f"t{spec.template_id}-s{seed}", template=spec.template_id, seed=seed)
    return lv.validate()

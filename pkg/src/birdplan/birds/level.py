"""Level descriptions and the versioned YAML level file."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import yaml

from ..core import PlanningError

FORMAT_VERSION = 1
MATERIALS = ("wood", "ice", "stone", "tnt")
BIRD_TYPES = {"red": 0, "blue": 1, "yellow": 2, "black": 3, "white": 4}


class InvalidLevel(PlanningError, ValueError):
    pass


@dataclass
class Bird:
    bird_id: int
    bird_type: str = "red"
    m_bird: float = 1.0
    radius: float = 0.3
    v_max: float = 20.0


@dataclass
class Pig:
    x_pig: float
    y_pig: float
    r_pig: float = 0.5
    m_pig: float = 1.0


@dataclass
class Block:
    x_block: float
    y_block: float
    block_width: float
    block_height: float
    block_mass: float
    material: str = "wood"
    life: float = 20.0
    stability: float = 10.0
    supports: list = field(default_factory=list)


@dataclass
class Platform:
    x_platform: float
    y_platform: float
    platform_width: float
    platform_height: float


@dataclass
class LevelDescription:
    """One level.  Positions are object centres in metres, ground at y = 0.

    Objects are addressed by position: birds ``b<i>``, pigs ``p<i>``, blocks
    ``k<i>`` and platforms ``l<i>``; ``Block.supports`` holds such ids.
    """

    slingshot: tuple = (0.0, 1.5)
    gravity: float = 9.8
    ground_damper: float = 0.4
    birds: list = field(default_factory=list)
    pigs: list = field(default_factory=list)
    blocks: list = field(default_factory=list)
    platforms: list = field(default_factory=list)
    name: str = "level"
    template: int = 0
    seed: int = 0

    @property
    def n_objects(self):
        return len(self.birds) + len(self.pigs) + len(self.blocks) + len(self.platforms)

    def validate(self):
        if [b.bird_id for b in self.birds] != list(range(len(self.birds))):
            raise InvalidLevel("bird ids must be 0..n-1 in firing order")
        if not 0 < self.ground_damper < 1:
            raise InvalidLevel("ground_damper must lie in (0, 1)")
        if self.gravity <= 0:
            raise InvalidLevel("gravity must be positive")
        for b in self.birds:
            if min(b.m_bird, b.radius, b.v_max) <= 0:
                raise InvalidLevel(f"bird {b.bird_id}: mass, radius and speed must be positive")
            if b.bird_type not in BIRD_TYPES:
                raise InvalidLevel(f"bird {b.bird_id}: unknown type {b.bird_type!r}")
        for i, p in enumerate(self.pigs):
            if min(p.r_pig, p.m_pig) <= 0 or p.y_pig < 0:
                raise InvalidLevel(f"pig p{i}: radius/mass must be positive and y >= 0")
        ids = {f"p{i}" for i in range(len(self.pigs))} | {f"k{i}" for i in range(len(self.blocks))}
        graph = {}
        for i, k in enumerate(self.blocks):
            if min(k.block_width, k.block_height, k.block_mass) <= 0 or k.y_block < 0:
                raise InvalidLevel(f"block k{i}: dimensions/mass must be positive and y >= 0")
            if k.material not in MATERIALS:
                raise InvalidLevel(f"block k{i}: unknown material {k.material!r}")
            for s in k.supports:
                if s not in ids:
                    raise InvalidLevel(f"block k{i} supports unknown object {s!r}")
            graph[f"k{i}"] = [s for s in k.supports if s.startswith("k")]
        for i, l in enumerate(self.platforms):
            if min(l.platform_width, l.platform_height) <= 0:
                raise InvalidLevel(f"platform l{i}: dimensions must be positive")
        _check_acyclic(graph)
        return self


def _check_acyclic(graph):
    state = {}

    def visit(n, path):
        state[n] = 1
        for m in graph.get(n, ()):
            if state.get(m) == 1:
                raise InvalidLevel(f"supports graph has a cycle through {m}")
            if m not in state:
                visit(m, path + [m])
        state[n] = 2

    for n in graph:
        if n not in state:
            visit(n, [n])


def dump_level(lv: LevelDescription) -> str:
    data = {
        "format_version": FORMAT_VERSION,
        "name": lv.name,
        "template": lv.template,
        "seed": lv.seed,
        "slingshot": {"x": float(lv.slingshot[0]), "y": float(lv.slingshot[1])},
        "gravity": lv.gravity,
        "ground_damper": lv.ground_damper,
        "birds": [asdict(b) for b in lv.birds],
        "pigs": [asdict(p) for p in lv.pigs],
        "blocks": [asdict(k) for k in lv.blocks],
        "platforms": [asdict(l) for l in lv.platforms],
    }
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None, width=100)


def load_level(text: str) -> LevelDescription:
    data = yaml.safe_load(text)
    if not isinstance(data, dict) or data.get("format_version") != FORMAT_VERSION:
        raise InvalidLevel(f"expected a level file with format_version: {FORMAT_VERSION}")
    try:
        lv = LevelDescription(
            slingshot=(float(data["slingshot"]["x"]), float(data["slingshot"]["y"])),
            gravity=float(data["gravity"]),
            ground_damper=float(data["ground_damper"]),
            birds=[Bird(**b) for b in data.get("birds") or []],
            pigs=[Pig(**p) for p in data.get("pigs") or []],
            blocks=[Block(**k) for k in data.get("blocks") or []],
            platforms=[Platform(**l) for l in data.get("platforms") or []],
            name=str(data.get("name", "level")),
            template=int(data.get("template", 0)),
            seed=int(data.get("seed", 0)),
        )
    except (KeyError, TypeError) as exc:
        raise InvalidLevel(f"malformed level file: {exc}") from None
    return lv.validate()


def read_level(path) -> LevelDescription:
    with open(path, encoding="utf-8") as fh:
        return load_level(fh.read())


def write_level(path, lv: LevelDescription):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_level(lv))

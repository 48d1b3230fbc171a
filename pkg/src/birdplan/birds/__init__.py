from ..trig import DomainError, cos_b, sin_b
from .physics import CoincidentCenters, ballistic_y, collide_bird_pig, direct_shot_angles
from .level import (
    Bird, Block, InvalidLevel, LevelDescription, Pig, Platform, dump_level, load_level,
    read_level, write_level,
)
from .domain import (
    BirdsConfig, birds_domain_text, birds_template, domain_source, level_problem_ast,
    observe_level, problem_text, single_bird, translate_level,
)
from .heuristics import BirdsView, proximity_heuristic, preferred_predicate, score_heuristic

__all__ = [
    "Bird", "Block", "BirdsConfig", "birds_domain_text", "level_problem_ast",
    "problem_text", "single_bird", "BirdsView", "CoincidentCenters", "DomainError",
    "InvalidLevel", "LevelDescription", "Pig", "Platform", "ballistic_y", "birds_template",
    "collide_bird_pig", "cos_b", "direct_shot_angles", "domain_source", "dump_level",
    "load_level", "observe_level", "preferred_predicate", "proximity_heuristic", "read_level",
    "score_heuristic", "sin_b", "translate_level", "write_level",
]

from .agents import (
    AGENTS, AgentConfig, EpisodeResult, Shot, agent_config, baseline_agent, run_episode,
)
from .harness import CSV_HEADER, BenchResult, BenchSettings, read_csv, run_benchmark
from .templates import SIMPLE_TEMPLATES, TEMPLATES, TemplateSpec, generate_level

__all__ = [
    "AGENTS", "AgentConfig", "BenchResult", "BenchSettings", "CSV_HEADER", "EpisodeResult",
    "SIMPLE_TEMPLATES", "Shot", "TEMPLATES", "TemplateSpec", "agent_config", "baseline_agent",
    "generate_level", "read_csv", "run_benchmark", "run_episode",
]

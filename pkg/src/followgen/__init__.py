"""Knowledge-enhanced follow-up question generation.

Three stages over a question-answer pair: recognize the contextual topic
entity, build a knowledge graph online and select the best background-
knowledge node, then fuse that knowledge with the context to generate the
follow-up question. Ships with deterministic mock backends, a corpus
loader, the evaluation metric suite, a CLI, and an HTTP service.
"""

from .backends import BackendSet, GenerationParams, WikiPage
from .corpus import Triplet, load_triplets, stats
from .fusion import FollowUpQuestion, RelatedKnowledge, continue_knowledge, generate_followup
from .pipeline import (
    PipelineConfig,
    PipelineResult,
    TraceRecord,
    run,
    run_ablation,
    run_batch,
    write_results,
)
from .recognition import KeyInfo, QAPair, RecognitionConfig, recognize
from .selection import (
    KGNode,
    KnowledgeGraph,
    NodeScore,
    SelectionConfig,
    build_graph,
    select_node,
)

__version__ = "0.1.0"

__all__ = [
    "BackendSet",
    "FollowUpQuestion",
    "GenerationParams",
    "KGNode",
    "KeyInfo",
    "KnowledgeGraph",
    "NodeScore",
    "PipelineConfig",
    "PipelineResult",
    "QAPair",
    "RecognitionConfig",
    "RelatedKnowledge",
    "SelectionConfig",
    "TraceRecord",
    "Triplet",
    "WikiPage",
    "build_graph",
    "continue_knowledge",
    "generate_followup",
    "load_triplets",
    "recognize",
    "run",
    "run_ablation",
    "run_batch",
    "select_node",
    "stats",
    "write_results",
]

"""Black-box adversarial attack harness for math word problem solvers."""

from .equation import (
    BinOp,
    EquationAst,
    Num,
    SolverVerdict,
    answers_equivalent,
    evaluate_equation,
    format_equation,
    judge,
    parse_equation,
)
from .errors import (
    DivisionByZero,
    EmptyInput,
    FormatError,
    InvalidConfig,
    MalformedResponse,
    MissingGold,
    MwpAttackError,
    NoBodySentences,
    NoQuestionFound,
    OracleUnavailable,
    ParseError,
)
from .harness import (
    AnnotationRecord,
    AnnotationSummary,
    CampaignConfig,
    CampaignReport,
    DatasetRecord,
    LoadResult,
    aggregate_annotations,
    annotate,
    export_adversarial_training_set,
    load_dataset,
    render_report,
    report_to_json,
    run_campaign,
)
from .oracles import (
    CachingParaphraser,
    CachingSolver,
    HttpParaphraseClient,
    HttpSolverClient,
    OracleCache,
    ParaphraseProviderConfig,
    RuleParaphraser,
    SolverEndpoint,
    get_paraphrases,
    rule_paraphraser,
    rule_paraphrases,
    scripted_solver,
    solve,
)
from .paraphrase import (
    CandidateSet,
    HeadEntity,
    enumerate_combinations,
    extract_head_entities,
    filter_candidates,
    sp_attack,
)
from .problem import (
    MathWordProblem,
    QuantityMention,
    Sentence,
    extract_quantities,
    identify_question,
    reassemble,
    segment_text,
    tokenize,
)
from .reorder import ReorderConfig, qr_attack, reorder_question, resolve_coreferences
from .results import METHOD_QR, METHOD_SP, AttackResult

__version__ = "0.1.0"

__all__ = [
    "AnnotationRecord", "AnnotationSummary", "AttackResult", "BinOp",
    "CachingParaphraser", "CachingSolver", "CampaignConfig", "CampaignReport",
    "CandidateSet", "DatasetRecord", "DivisionByZero", "EmptyInput",
    "EquationAst", "FormatError", "HeadEntity", "HttpParaphraseClient",
    "HttpSolverClient", "InvalidConfig", "LoadResult", "MalformedResponse",
    "MathWordProblem", "METHOD_QR", "METHOD_SP", "MissingGold",
    "MwpAttackError", "NoBodySentences", "NoQuestionFound", "Num",
    "OracleCache", "OracleUnavailable", "ParaphraseProviderConfig",
    "ParseError", "QuantityMention", "ReorderConfig", "RuleParaphraser",
    "Sentence", "SolverEndpoint", "SolverVerdict", "aggregate_annotations",
    "annotate", "answers_equivalent", "enumerate_combinations",
    "evaluate_equation", "export_adversarial_training_set",
    "extract_head_entities", "extract_quantities", "filter_candidates",
    "format_equation", "get_paraphrases", "identify_question", "judge",
    "load_dataset", "parse_equation", "qr_attack", "reassemble",
    "render_report", "reorder_question", "report_to_json",
    "resolve_coreferences", "rule_paraphraser", "rule_paraphrases",
    "run_campaign", "scripted_solver", "segment_text", "solve", "sp_attack",
    "tokenize",
]

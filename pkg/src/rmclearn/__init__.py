"""rmclearn: prove safety of parameterised protocols, or find a reachable
bad configuration, by learning a regular inductive invariant with active
automata-learning algorithms."""

from .automata import (
    Alphabet,
    AlphabetMismatchError,
    Dfa,
    Nfa,
    Word,
    accepts,
    complement,
    determinize,
    includes,
    intersect,
    is_empty,
    minimize,
    shortest_symmetric_difference,
    union,
    word_nfa,
)
from .learner import (
    ALGORITHMS,
    Counterexample,
    Equal,
    ExactTeacher,
    KvLearner,
    LearnerRun,
    LearnerStats,
    NlStarLearner,
    ObservationTable,
    RfsaTable,
    Stop,
    TableLearner,
    TeacherContractError,
    build_candidate,
    close_table,
    make_learner,
    rs_analyze,
    run_learner,
)
from .modelio import (
    ModelDoc,
    ModelSyntaxError,
    compile_model,
    export_dot,
    parse_model,
    parse_model_doc,
    parse_regex_text,
    pretty_model,
)
from .regex import (
    Concat,
    Empty,
    Epsilon,
    Pair,
    Ref,
    Regex,
    RegexCompileError,
    Star,
    Sym,
    Union,
    compile_pair_regex,
    compile_regex,
    resolve,
)
from .teacher import (
    InvariantReport,
    Limits,
    ReachabilityTeacher,
    RmcProblem,
    Safe,
    Unknown,
    Unsafe,
    Verdict,
    check_invariant,
    run_prover,
)
from .transducer import (
    Transducer,
    check_length_preserving,
    identity_transducer,
    inductive_violation,
    post_image,
    pre_image,
)

__version__ = "0.1.0"

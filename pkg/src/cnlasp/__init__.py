"""cnlasp: a bidirectional compiler between a controlled natural language
and answer set programs, with a brute-force stable-model oracle for
verifying semantic round trips."""

from .anaphora import (
    AntecedentStore,
    may_generate_definite,
    resolve_definite,
    resolve_proper_name,
)
from .asp_io import (
    AspSyntaxError,
    ReadResult,
    UngroundFact,
    UnknownSymbol,
    UnsafeClause,
    WriteResult,
    parse_asp,
    read_program,
    write_program,
)
from .grammar import Continuation, Feats, GenerationError, Grammar, ParseError
from .lexicon import (
    DuplicateEntry,
    LexEntry,
    Lexicon,
    LexiconSyntaxError,
    MissingSurfaceForm,
    default_lexicon,
    load_lexicon,
    load_lexicon_file,
)
from .model import (
    AspClause,
    AspProgram,
    Atom,
    CardHead,
    CardSpec,
    GroupStack,
    InternalForm,
    LogicVar,
    QueryMark,
    Sublist,
    TypedLiteral,
    clause_equal_modulo_renaming,
    mirror,
    program_equiv,
    resolve,
    unify,
)
from .oracle import (
    AtomLimitExceeded,
    UniverseTooLarge,
    answer_sets,
    ground,
    query_answers,
    solve,
)
from .planner import (
    NameExhaustion,
    insert_variable_names,
    plan,
    plan_coordination,
    plan_enumeration,
    seed_antecedents,
)
from .service import Pipeline
from .tokenizer import UnterminatedSentence, detokenize, tokenize

__version__ = "0.1.0"

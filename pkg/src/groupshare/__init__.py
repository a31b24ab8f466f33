"""Secret sharing over group presentations and the word problem.

Participants hold private small cancellation presentations as long-term
secrets; share bits travel on open channels as group words that decode by
Dehn's algorithm.  An XOR scheme requires all participants to recover the
secret; a hybrid scheme layers the word encoding under polynomial
threshold sharing so any t of n suffice.  A masked-ring simulator lets
participants combine shares without revealing them.
"""

from .errors import BudgetExhausted
from .freegroup import (
    Alphabet,
    Word,
    concat,
    conjugate,
    cyclic_permutations,
    cyclically_reduce,
    invert,
    parse_word,
    random_reduced_word,
    reduce,
    serialize_word,
)
from .scheme import (
    BitColumn,
    SessionConfig,
    WordColumn,
    WordParams,
    column_to_int,
    deal_nn,
    deal_tn,
    decode_column,
    encode_column,
    int_to_column,
    recover_secret_nn,
    recover_share,
    split_secret,
)
from .securesum import (
    Message,
    PrivacyAudit,
    Transcript,
    export_transcript,
    replay_transcript,
    run_secure_linear_combination,
    run_secure_sum,
    transcript_privacy_audit,
)
from .shamir import (
    Polynomial,
    PrimeModulus,
    SharePoint,
    interpolate_at_zero,
    is_prime,
    lagrange_coefficients,
    poly_eval,
    random_polynomial,
)
from .smallcancel import (
    CancellationReport,
    DehnStep,
    DehnTrace,
    PieceReport,
    Presentation,
    SymmetrizedSet,
    check_small_cancellation,
    dehn_is_trivial,
    make_nontrivial_word,
    make_trivial_word,
    make_trivial_word_certified,
    max_piece,
    parse_presentation,
    random_platform_group,
    serialize_presentation,
    symmetrize,
)
from .tietze import (
    BreakdownResult,
    InvertGenerator,
    RightMultiplyGenerator,
    T1Intro,
    T2Cancel,
    T3Auto,
    T4Replace,
    apply_move,
    apply_t1,
    apply_t2,
    apply_t3,
    apply_t4prime,
    break_relators,
    expand_word,
    replay,
    serialize_breakdown,
)

__version__ = "0.1.0"

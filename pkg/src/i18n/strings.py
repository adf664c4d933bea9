from enum import Enum


class Strings(str, Enum):
    # Main App
    STARTING_COMMAND = "{} {}: running '{}'"
    FATAL_ERROR = "Fatal error: {}"
    CONFIG_LOADED = "Configuration loaded from {}"

    # Errors
    VALIDATION_ERROR = "Invalid input: {}"
    SIZE_GUARD_ERROR = "Instance too large: {}"
    PARSE_ERROR_AT = "{}: line {}, column {}: {}"
    FILE_UNREADABLE = "Cannot read {}: {}"

    # Auction
    AUCTION_STARTED = "Running auction: {} goods, {} bidders, solver={}, seed={}"
    WINNERS_FOUND = "WDP solved by {}: max value {} with {} winning allocation(s)"
    TIE_BROKEN = "Tie among {} allocations broken by {}"
    OUTCOME_WRITTEN = "Outcome written to {}"

    # Soundness
    CHECK_SUMMARY = "{:<18} {:>6} checked  {:>4} failed  {}"
    CHECK_PASSED = "PASS"
    CHECK_FAILED = "FAIL"
    CHECK_COUNTEREXAMPLE = "First counterexample ({}): {}"
    CHECK_ALL_PASSED = "All soundness goals passed."
    CHECK_SOME_FAILED = "Soundness goals failed: {}"
    EQUIVALENCE_SIZES = "Equivalence sizes: partitions {}, allocations {}"

    # Enumeration
    COUNT_LINE = "count: {}"

#pragma once

#include <stdexcept>
#include <string>

namespace dgi {

enum class Errc {
    // graph parsing / validation
    MalformedBlock,
    UnknownState,
    DuplicateId,
    DanglingPredecessor,
    CycleDetected,
    NoFinalResult,
    UnknownNode,
    InvalidPrevious,
    // intervention
    NotACondition,
    IdCollision,
    NoStarredNode,
    AmbiguousFirstIntervention,
    AmbiguousTargetFinal,
    NotAFinalResult,
    NonConditionAssumption,
    IllegalEntryPoint,
    IllegalRedundantNode,
    UnsoundGraph,
    // generation
    NoEntryPoint,
    DgmFailure,
    EmptyQuestion,
    NoEligibleCondition,
    NoCondition,
    // prompt rendering
    MissingPlaceholder,
    UnknownPlaceholder,
    UnknownTemplate,
    // backend client
    Timeout,
    AuthFailure,
    RateLimited,
    MalformedResponse,
    // eval / io
    NonPositiveDuration,
    CoverageMismatch,
    SchemaMismatch,
    MalformedLine,
    EmptyDataset,
    ConfigError,
    Io,
};

const char* errc_name(Errc code);

class DgiError : public std::runtime_error {
public:
    DgiError(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace dgi

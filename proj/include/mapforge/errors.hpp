#pragma once

#include <stdexcept>
#include <string>

namespace mapforge {

// Error with a stable machine-readable code. The CLI maps codes to exit
// statuses and emits them as JSON on stderr.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)), detail_(detail) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string code_;
    std::string detail_;
};

#define MAPFORGE_DEFINE_ERROR(NAME)                                    \
    class NAME : public Error {                                        \
    public:                                                            \
        explicit NAME(const std::string& detail) : Error(#NAME, detail) {} \
    }

MAPFORGE_DEFINE_ERROR(InvalidSpec);
MAPFORGE_DEFINE_ERROR(DegenerateView);
MAPFORGE_DEFINE_ERROR(UnknownFrame);
MAPFORGE_DEFINE_ERROR(UnknownCamera);
MAPFORGE_DEFINE_ERROR(EmptyLog);
MAPFORGE_DEFINE_ERROR(NoGlobalAnchor);
MAPFORGE_DEFINE_ERROR(SolverDiverged);
MAPFORGE_DEFINE_ERROR(TooFewObservations);
MAPFORGE_DEFINE_ERROR(AllPointsFiltered);
MAPFORGE_DEFINE_ERROR(NoSupport);
MAPFORGE_DEFINE_ERROR(OutOfExtent);
MAPFORGE_DEFINE_ERROR(EmptyEvaluation);
MAPFORGE_DEFINE_ERROR(MissingArtifact);
MAPFORGE_DEFINE_ERROR(InvalidConfig);

#undef MAPFORGE_DEFINE_ERROR

} // namespace mapforge

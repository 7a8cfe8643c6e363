#include "pipeframe/error.hpp"

namespace pipeframe {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ok: return "ok";
    case Errc::io_error: return "IoError";
    case Errc::decode_error: return "DecodeError";
    case Errc::empty_sequence: return "EmptySequence";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::too_many_levels: return "TooManyLevels";
    case Errc::border_violation: return "BorderViolation";
    case Errc::size_mismatch: return "SizeMismatch";
    case Errc::degenerate_input: return "DegenerateInput";
    case Errc::no_consensus: return "NoConsensus";
    case Errc::pair_rejected: return "PairRejected";
    case Errc::too_few_points: return "TooFewPoints";
    case Errc::degenerate_configuration: return "DegenerateConfiguration";
    case Errc::count_mismatch: return "CountMismatch";
    case Errc::parse_error: return "ParseError";
    case Errc::invalid_config: return "InvalidConfig";
  }
  return "UnknownError";
}

} // namespace pipeframe

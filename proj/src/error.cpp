#include "chatterkit/error.hpp"

namespace chatterkit {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::missing_file: return "MissingFile";
    case Errc::parse_error: return "ParseError";
    case Errc::empty_dataset: return "EmptyDataset";
    case Errc::io_error: return "IoError";
    case Errc::invalid_cutoff: return "InvalidCutoff";
    case Errc::zero_factor: return "ZeroFactor";
    case Errc::empty_input: return "EmptyInput";
    case Errc::lag_too_large: return "LagTooLarge";
    case Errc::signal_too_short: return "SignalTooShort";
    case Errc::unknown_wavelet: return "UnknownWavelet";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::no_unstable_records: return "NoUnstableRecords";
    case Errc::constant_signal: return "ConstantSignal";
    case Errc::degenerate_signal: return "DegenerateSignal";
    case Errc::infeasible_window: return "InfeasibleWindow";
    case Errc::k_too_large: return "KTooLarge";
    case Errc::too_few_points: return "TooFewPoints";
    case Errc::invalid_pixel_size: return "InvalidPixelSize";
    case Errc::degenerate_mesh: return "DegenerateMesh";
    case Errc::single_class_training_set: return "SingleClassTrainingSet";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::feature_mismatch: return "FeatureMismatch";
    case Errc::too_few_tags: return "TooFewTags";
    case Errc::missing_features: return "MissingFeatures";
    case Errc::incomplete_report: return "IncompleteReport";
    case Errc::unresolvable_delay: return "UnresolvableDelay";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace chatterkit

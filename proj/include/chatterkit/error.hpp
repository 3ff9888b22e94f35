#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chatterkit {

enum class Errc : std::uint8_t {
  missing_file,
  parse_error,
  empty_dataset,
  io_error,
  invalid_cutoff,
  zero_factor,
  empty_input,
  lag_too_large,
  signal_too_short,
  unknown_wavelet,
  index_out_of_range,
  no_unstable_records,
  constant_signal,
  degenerate_signal,
  infeasible_window,
  k_too_large,
  too_few_points,
  invalid_pixel_size,
  degenerate_mesh,
  single_class_training_set,
  dimension_mismatch,
  feature_mismatch,
  too_few_tags,
  missing_features,
  incomplete_report,
  unresolvable_delay,
  invalid_argument,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

private:
  Errc code_;
};

}  // namespace chatterkit

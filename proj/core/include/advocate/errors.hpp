#pragma once

#include <stdexcept>
#include <string>

namespace advocate {

// One enumerator per failure condition so tests can assert on the exact cause.
enum class errc {
  unknown_parent,
  duplicate_block,
  unknown_block,
  cyclic_input,
  unknown_checkpoint,
  stale_block,
  missing_referring_block,
  checkpoint_conflict,
  invalid_block,
  negative_component,
  domain_error,
  mismatched_configs,
  empty_window,
  config_error,
  io_error,
  safety_violation,
};

const char* errc_name(errc code) noexcept;

class protocol_error : public std::runtime_error {
public:
  protocol_error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
  throw protocol_error(code, what);
}

} // namespace advocate

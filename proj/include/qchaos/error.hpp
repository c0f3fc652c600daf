#pragma once

#include <stdexcept>

namespace qchaos {

/// Bad configuration file or CLI parameters. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numeric failure: eigensolver breakdown, norm drift, basis truncation.
/// The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// More than the tolerated fraction of sweep grid points failed. Exit code 4.
class PartialSweepError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A scanned curve never crosses the requested threshold (eta_c, S_q = 1, 1/e decay);
/// the caller widens the sweep or extends the time window.
class NoCrossingError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested basis exceeds the configured dimension cap.
class CapacityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qchaos

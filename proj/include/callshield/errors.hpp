#pragma once

#include <stdexcept>
#include <string>

namespace callshield {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid (m, t) or primitive polynomial.
class CodeConstructionError : public Error {
 public:
  using Error::Error;
};

class PayloadTooLargeError : public Error {
 public:
  using Error::Error;
};

/// WAV or other file format violation. The message names the offending property.
class FormatError : public Error {
 public:
  using Error::Error;
};

class FrameSizeError : public Error {
 public:
  using Error::Error;
};

class CarrierTooShortError : public Error {
 public:
  using Error::Error;
};

/// Channel condition not present in the calibration table.
class CalibrationMissError : public Error {
 public:
  using Error::Error;
};

class KeyStoreError : public Error {
 public:
  using Error::Error;
};

}  // namespace callshield

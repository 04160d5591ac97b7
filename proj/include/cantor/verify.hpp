#pragma once

#include <string>

#include "cantor/certificate.hpp"
#include "cantor/largesets.hpp"

namespace cantor {

/// Outcome of a verification. On failure, `condition` names the first violated
/// check, `stage` is the stage it refers to (-1 if none) and `detail` carries
/// both sides of the failed comparison.
struct VerifyReport {
  bool pass = true;
  std::string condition;
  int stage = -1;
  std::string detail;
};

std::string format_report(const VerifyReport& report);

/// Category certificates against their dense-open family. Throws DigestMismatch
/// when the recorded digest does not match the family, MalformedCertificate
/// when the certificate is for a measure variant.
VerifyReport verify_certificate(const Certificate& cert, const DenseOpenFamily& family);

/// Measure certificates against their filtration.
VerifyReport verify_certificate(const Certificate& cert, const Filtration& filt);

}  // namespace cantor

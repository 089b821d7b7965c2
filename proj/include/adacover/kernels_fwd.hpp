#pragma once

namespace adacover::kernels {

/// Selects the OpenMP kernels or their serial reference twins. Both produce
/// bit-identical results for the same inputs.
enum class Exec { serial, parallel };

}  // namespace adacover::kernels

#pragma once

namespace lmw {

/// Selects between the OpenMP kernel and its serial reference. Both produce identical results.
enum class Exec { serial, parallel };

/// Sets the OpenMP thread count for subsequent parallel kernels; no-op without OpenMP.
void set_thread_count(int threads) noexcept;
int thread_count() noexcept;

}  // namespace lmw

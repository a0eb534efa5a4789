#pragma once

#include <string>

#include "pfsi/grid.hpp"
#include "pfsi/plate.hpp"
#include "pfsi/stokes.hpp"

namespace pfsi {

/// Little-endian binary cache:
///   magic "PFSI" | version u32 | nx u32 | nz u32
///   matrix count u32, then per matrix:
///     name_len u32 | name bytes | rows u64 | cols u64 | nnz u64
///     | rowptr u64[rows+1] | colind u64[nnz] | values f64[nnz]   (CSR)
///   stokes count u32, per mode: lambda f64 | e f64[n_velocity] | p f64[cells]
///   plate count u32, per mode: kappa f64 | g f64[n_beam]
///   lifting rows u64 | cols u64 | values f64[rows*cols] column-major
///   checksum u64 (FNV-1a over every preceding byte)
struct CacheContent {
  DiscreteOperators ops;
  StokesBasis stokes;
  PlateBasis plate;
  LiftingOperator lift;
  uint64_t checksum = 0;
};

void write_cache(const std::string& path, const DiscreteOperators& ops,
                 const StokesBasis& stokes, const PlateBasis& plate,
                 const LiftingOperator& lift);

/// Loads and verifies a cache against the requested configuration; throws
/// with the differing field spelled out on any mismatch (nx, nz, m, n,
/// version, checksum).
CacheContent read_cache(const std::string& path, int nx, int nz, int m, int n);

/// Checksum stored in the trailer (also recomputed and verified on read).
uint64_t cache_checksum(const std::string& path);

} // namespace pfsi

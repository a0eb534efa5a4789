#include "pfsi/cache.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

static_assert(__BYTE_ORDER__ == __ORDER_LITTLE_ENDIAN__,
              "cache format is little-endian");

namespace pfsi {

namespace {

constexpr uint32_t kVersion = 1;

uint64_t fnv1a(const char* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL) {
  for (size_t i = 0; i < len; ++i) {
    h ^= uint64_t(uint8_t(data[i]));
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  void raw(const void* p, size_t len) {
    const char* c = static_cast<const char*>(p);
    buf_.insert(buf_.end(), c, c + len);
  }
  template <typename T>
  void pod(T v) {
    raw(&v, sizeof(T));
  }
  void str(const std::string& s) {
    pod(uint32_t(s.size()));
    raw(s.data(), s.size());
  }
  void vec(const Vec& v) { raw(v.data(), sizeof(double) * size_t(v.size())); }
  void dense(const Mat& m) {
    pod(uint64_t(m.rows()));
    pod(uint64_t(m.cols()));
    raw(m.data(), sizeof(double) * size_t(m.size()));
  }
  void csr(const std::string& name, const SpMat& a) {
    Eigen::SparseMatrix<double, Eigen::RowMajor> r(a);
    r.makeCompressed();
    str(name);
    pod(uint64_t(r.rows()));
    pod(uint64_t(r.cols()));
    pod(uint64_t(r.nonZeros()));
    for (Index i = 0; i <= r.rows(); ++i) pod(uint64_t(r.outerIndexPtr()[i]));
    for (Index k = 0; k < r.nonZeros(); ++k) pod(uint64_t(r.innerIndexPtr()[k]));
    raw(r.valuePtr(), sizeof(double) * size_t(r.nonZeros()));
  }

  const std::vector<char>& bytes() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  explicit Reader(std::vector<char> bytes) : buf_(std::move(bytes)) {}

  void raw(void* p, size_t len) {
    if (pos_ + len > buf_.size()) throw std::runtime_error("cache truncated");
    std::memcpy(p, buf_.data() + pos_, len);
    pos_ += len;
  }
  template <typename T>
  T pod() {
    T v;
    raw(&v, sizeof(T));
    return v;
  }
  std::string str() {
    const uint32_t len = pod<uint32_t>();
    std::string s(len, '\0');
    raw(s.data(), len);
    return s;
  }
  Vec vec(Index n) {
    Vec v(n);
    raw(v.data(), sizeof(double) * size_t(n));
    return v;
  }
  Mat dense() {
    const auto rows = Index(pod<uint64_t>());
    const auto cols = Index(pod<uint64_t>());
    Mat m(rows, cols);
    raw(m.data(), sizeof(double) * size_t(m.size()));
    return m;
  }
  SpMat csr(std::string* name) {
    *name = str();
    const auto rows = Index(pod<uint64_t>());
    const auto cols = Index(pod<uint64_t>());
    const auto nnz = Index(pod<uint64_t>());
    const auto n_rowptr = size_t(rows) + 1;
    const auto n_nnz = size_t(nnz);
    std::vector<uint64_t> rowptr(n_rowptr);
    raw(rowptr.data(), sizeof(uint64_t) * rowptr.size());
    std::vector<uint64_t> colind(n_nnz);
    raw(colind.data(), sizeof(uint64_t) * colind.size());
    std::vector<double> vals(n_nnz);
    raw(vals.data(), sizeof(double) * vals.size());

    std::vector<Triplet> trip;
    trip.reserve(size_t(nnz));
    for (Index r = 0; r < rows; ++r) {
      for (uint64_t k = rowptr[size_t(r)]; k < rowptr[size_t(r) + 1]; ++k) {
        trip.emplace_back(r, Index(colind[size_t(k)]), vals[size_t(k)]);
      }
    }
    SpMat a(rows, cols);
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();
    return a;
  }

  size_t pos() const { return pos_; }
  const std::vector<char>& bytes() const { return buf_; }

 private:
  std::vector<char> buf_;
  size_t pos_ = 0;
};

std::vector<char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cache: cannot open " + path);
  return std::vector<char>(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
}

void expect_field(const std::string& field, long long cached, long long wanted) {
  if (cached != wanted) {
    std::ostringstream msg;
    msg << "stale cache: field '" << field << "' is " << cached
        << " in the cache but " << wanted << " in the configuration";
    throw std::runtime_error(msg.str());
  }
}

} // namespace

void write_cache(const std::string& path, const DiscreteOperators& ops,
                 const StokesBasis& stokes, const PlateBasis& plate,
                 const LiftingOperator& lift) {
  Writer w;
  w.raw("PFSI", 4);
  w.pod(kVersion);
  w.pod(uint32_t(ops.grid.nx));
  w.pod(uint32_t(ops.grid.nz));

  w.pod(uint32_t(6));
  w.csr("D", ops.D);
  w.csr("Gp", ops.Gp);
  w.csr("Lv", ops.Lv);
  w.csr("T", ops.T);
  w.csr("B4", ops.B4.sparseView());
  w.csr("B2", ops.B2.sparseView());

  w.pod(uint32_t(stokes.count()));
  for (const auto& mode : stokes.modes) {
    w.pod(mode.lambda);
    w.vec(mode.e);
    w.vec(mode.p);
  }
  w.pod(uint32_t(plate.count()));
  for (const auto& mode : plate.modes) {
    w.pod(mode.kappa);
    w.vec(mode.g);
  }
  w.dense(lift.Nmat);

  const uint64_t sum = fnv1a(w.bytes().data(), w.bytes().size());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cache: cannot write " + path);
  out.write(w.bytes().data(), std::streamsize(w.bytes().size()));
  out.write(reinterpret_cast<const char*>(&sum), sizeof(sum));
  if (!out) throw std::runtime_error("cache: write failed for " + path);
}

CacheContent read_cache(const std::string& path, int nx, int nz, int m, int n) {
  auto bytes = slurp(path);
  if (bytes.size() < 4 + 12 + 8) throw std::runtime_error("cache truncated");

  uint64_t stored_sum = 0;
  std::memcpy(&stored_sum, bytes.data() + bytes.size() - 8, 8);
  const uint64_t actual = fnv1a(bytes.data(), bytes.size() - 8);
  if (stored_sum != actual) {
    throw std::runtime_error("stale cache: field 'checksum' does not match payload");
  }
  bytes.resize(bytes.size() - 8);

  Reader r(std::move(bytes));
  char magic[4];
  r.raw(magic, 4);
  if (std::memcmp(magic, "PFSI", 4) != 0) {
    throw std::runtime_error("cache: bad magic");
  }
  expect_field("version", r.pod<uint32_t>(), kVersion);
  const auto file_nx = int(r.pod<uint32_t>());
  const auto file_nz = int(r.pod<uint32_t>());
  expect_field("nx", file_nx, nx);
  expect_field("nz", file_nz, nz);

  CacheContent out;
  out.checksum = stored_sum;
  // Operators are reassembled (deterministic) and verified against the file.
  out.ops = assemble_operators(build_grid(file_nx, file_nz));

  const uint32_t nmat = r.pod<uint32_t>();
  for (uint32_t i = 0; i < nmat; ++i) {
    std::string name;
    const SpMat a = r.csr(&name);
    const SpMat* want = nullptr;
    SpMat b4view, b2view;
    if (name == "D") want = &out.ops.D;
    else if (name == "Gp") want = &out.ops.Gp;
    else if (name == "Lv") want = &out.ops.Lv;
    else if (name == "T") want = &out.ops.T;
    else if (name == "B4") { b4view = out.ops.B4.sparseView(); want = &b4view; }
    else if (name == "B2") { b2view = out.ops.B2.sparseView(); want = &b2view; }
    else throw std::runtime_error("cache: unknown matrix '" + name + "'");
    if ((Mat(a) - Mat(*want)).cwiseAbs().maxCoeff() != 0.0) {
      throw std::runtime_error("stale cache: matrix '" + name +
                               "' differs from a fresh assembly");
    }
  }

  const auto file_m = int(r.pod<uint32_t>());
  expect_field("m", file_m, m);
  out.stokes.E = Mat(out.ops.grid.n_velocity(), file_m);
  out.stokes.lambdas = Vec(file_m);
  for (int i = 0; i < file_m; ++i) {
    StokesMode mode;
    mode.lambda = r.pod<double>();
    mode.e = r.vec(out.ops.grid.n_velocity());
    mode.p = r.vec(out.ops.grid.n_pressure());
    out.stokes.E.col(i) = mode.e;
    out.stokes.lambdas(i) = mode.lambda;
    out.stokes.modes.push_back(std::move(mode));
  }

  const auto file_n = int(r.pod<uint32_t>());
  expect_field("n", file_n, n);
  const Index nb = out.ops.grid.n_beam();
  out.plate.Gmat = Mat(nb, file_n);
  out.plate.kappas = Vec(file_n);
  out.plate.P = Mat::Identity(nb, nb) - Vec::Ones(nb) * out.ops.m.transpose();
  for (int j = 0; j < file_n; ++j) {
    PlateMode mode;
    mode.kappa = r.pod<double>();
    mode.g = r.vec(nb);
    out.plate.Gmat.col(j) = mode.g;
    out.plate.kappas(j) = mode.kappa;
    out.plate.modes.push_back(std::move(mode));
  }

  out.lift.Nmat = r.dense();
  if (out.lift.Nmat.rows() != out.ops.grid.n_velocity() ||
      out.lift.Nmat.cols() != nb) {
    throw std::runtime_error("cache: lifting operator has wrong shape");
  }
  return out;
}

uint64_t cache_checksum(const std::string& path) {
  const auto bytes = slurp(path);
  if (bytes.size() < 8) throw std::runtime_error("cache truncated");
  uint64_t sum = 0;
  std::memcpy(&sum, bytes.data() + bytes.size() - 8, 8);
  return sum;
}

} // namespace pfsi

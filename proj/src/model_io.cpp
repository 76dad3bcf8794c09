#include "vlac/model_io.hpp"

#include <fstream>

#include "binary_io.hpp"

namespace vlac {
namespace {

constexpr std::string_view kMagic = "VLACMODL";

void write_matrix(binary::Writer& w, const Matrix& m) {
  w.u32(static_cast<std::uint32_t>(m.rows()));
  w.u32(static_cast<std::uint32_t>(m.cols()));
  w.f32s(m.values());
}

Matrix read_matrix(binary::Reader& r) {
  const std::uint32_t rows = r.u32();
  const std::uint32_t cols = r.u32();
  Matrix m(rows, cols);
  r.f32s(m.values());
  return m;
}

void write_vector(binary::Writer& w, const Vector& v) {
  w.u32(static_cast<std::uint32_t>(v.size()));
  w.f32s(v);
}

Vector read_vector(binary::Reader& r) {
  Vector v(r.u32());
  r.f32s(v);
  return v;
}

void write_basis(binary::Writer& w, const ProjectionBasis& b) {
  write_matrix(w, b.rows);
  write_vector(w, b.mean);
  write_vector(w, b.eigenvalues);
}

ProjectionBasis read_basis(binary::Reader& r) {
  ProjectionBasis b;
  b.rows = read_matrix(r);
  b.mean = read_vector(r);
  b.eigenvalues = read_vector(r);
  if (b.eigenvalues.size() != b.rows.rows() || (b.rows.rows() > 0 && b.mean.size() != b.rows.cols())) {
    throw Error(ErrorCode::kMalformedFile, r.source() + ": inconsistent basis shape");
  }
  return b;
}

}  // namespace

void write_model(const TrainedModel& model, std::ostream& out) {
  binary::Writer w(out);
  w.magic(kMagic);
  w.u16(kModelFormatVersion);
  w.u8(static_cast<std::uint8_t>(model.method));
  const auto& p = model.params;
  for (std::uint32_t v : {p.F, p.J, p.N, p.M, p.D, p.D0, p.alpha1, p.alpha2, p.h, p.gof_size, p.overlap, p.seed,
                          p.normalize}) {
    w.u32(v);
  }
  write_matrix(w, model.codebook.centers);
  write_basis(w, model.stage1_basis);
  write_matrix(w, model.stage2.centers);
  write_basis(w, model.basis);
  if (!out) throw Error(ErrorCode::kIo, "failed writing model");
}

TrainedModel read_model(std::istream& in, const std::string& source) {
  binary::Reader r(in, source);
  r.expect_magic(kMagic);
  const std::uint16_t version = r.u16();
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::kMalformedFile, source + ": unsupported model version " + std::to_string(version));
  }
  const std::uint8_t tag = r.u8();
  if (tag > static_cast<std::uint8_t>(Method::kHp)) {
    throw Error(ErrorCode::kMalformedFile, source + ": unknown method tag " + std::to_string(tag));
  }
  TrainedModel model;
  model.method = static_cast<Method>(tag);
  auto& p = model.params;
  for (std::uint32_t* v : {&p.F, &p.J, &p.N, &p.M, &p.D, &p.D0, &p.alpha1, &p.alpha2, &p.h, &p.gof_size,
                           &p.overlap, &p.seed, &p.normalize}) {
    *v = r.u32();
  }
  model.codebook.centers = read_matrix(r);
  model.codebook.seed = p.seed;
  model.stage1_basis = read_basis(r);
  model.stage2.centers = read_matrix(r);
  model.stage2.seed = p.seed + 1u;
  model.basis = read_basis(r);
  if (model.basis.input_dim() != model.raw_dim()) {
    throw Error(ErrorCode::kMalformedFile, source + ": basis input dimension does not match the codebooks");
  }
  return model;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  write_model(model, out);
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_model(in, path.string());
}

}  // namespace vlac

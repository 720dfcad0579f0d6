#include "gaussmatch/common.hpp"

namespace gaussmatch {

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  require(dim_ > 0, "PointCloud: dimension must be at least 1");
  require(coords_.size() % dim_ == 0, "PointCloud: coordinate count is not a multiple of the dimension");
}

void PointCloud::push_back(std::span<const double> point) {
  if (point.size() != dim_) throw DimensionMismatch("PointCloud::push_back: dimension mismatch");
  coords_.insert(coords_.end(), point.begin(), point.end());
}

void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace gaussmatch

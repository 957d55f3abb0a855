#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace stmg
{

/// Coefficient vector of one subinterval: k+1 velocity blocks followed by
/// k+1 pressure blocks, stored contiguously as
/// (V^1, ..., V^{k+1}, P^1, ..., P^{k+1}).
class BlockVector
{
public:
  BlockVector() = default;

  BlockVector(int n_slots, Eigen::Index n_v, Eigen::Index n_p)
    : n_slots_(n_slots)
    , n_v_(n_v)
    , n_p_(n_p)
    , data_(Eigen::VectorXd::Zero(n_slots * (n_v + n_p)))
  {}

  int n_slots() const { return n_slots_; }
  Eigen::Index n_velocity() const { return n_v_; }
  Eigen::Index n_pressure() const { return n_p_; }
  Eigen::Index size() const { return data_.size(); }

  Eigen::Ref<Eigen::VectorXd> velocity(int a)
  {
    return data_.segment(a * n_v_, n_v_);
  }
  Eigen::Ref<const Eigen::VectorXd> velocity(int a) const
  {
    return data_.segment(a * n_v_, n_v_);
  }
  Eigen::Ref<Eigen::VectorXd> pressure(int a)
  {
    return data_.segment(n_slots_ * n_v_ + a * n_p_, n_p_);
  }
  Eigen::Ref<const Eigen::VectorXd> pressure(int a) const
  {
    return data_.segment(n_slots_ * n_v_ + a * n_p_, n_p_);
  }

  Eigen::Index velocity_offset(int a) const { return a * n_v_; }
  Eigen::Index pressure_offset(int a) const
  {
    return n_slots_ * n_v_ + a * n_p_;
  }

  Eigen::VectorXd &flat() { return data_; }
  const Eigen::VectorXd &flat() const { return data_; }

  void setZero() { data_.setZero(); }

  double norm() const { return data_.norm(); }
  double dot(const BlockVector &other) const { return data_.dot(other.data_); }

  bool same_shape(const BlockVector &other) const
  {
    return n_slots_ == other.n_slots_ && n_v_ == other.n_v_ && n_p_ == other.n_p_;
  }

  BlockVector &operator+=(const BlockVector &o)
  {
    data_ += o.data_;
    return *this;
  }
  BlockVector &operator-=(const BlockVector &o)
  {
    data_ -= o.data_;
    return *this;
  }
  BlockVector &operator*=(double s)
  {
    data_ *= s;
    return *this;
  }

private:
  int          n_slots_ = 0;
  Eigen::Index n_v_     = 0;
  Eigen::Index n_p_     = 0;
  Eigen::VectorXd data_;
};

inline void
require_same_shape(const BlockVector &a, const BlockVector &b, const char *where)
{
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(where) + ": block vector shape mismatch");
}

} // namespace stmg

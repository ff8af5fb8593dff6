#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace minarea {

// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

// Streaming JSON emitter with caller-controlled key order and fixed number
// formatting, so identical inputs produce byte-identical documents.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();

  JsonWriter& key(const std::string& k);

  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(long long v);
  JsonWriter& value(unsigned long long v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);
  JsonWriter& value(const Eigen::VectorXd& v);
  JsonWriter& null_value();

  JsonWriter& kv(const std::string& k, double v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, int v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, long long v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, unsigned long long v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, bool v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, const std::string& v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, const char* v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, const Eigen::VectorXd& v) { return key(k).value(v); }

  const std::string& str() const { return out_; }

 private:
  void separator();
  void raw(const std::string& s);

  std::string out_;
  std::vector<int> counts_;
  bool after_key_ = false;
};

}  // namespace minarea

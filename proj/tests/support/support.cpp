#include "support.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "testmap/java_parser.hpp"
#include "testmap/mapper.hpp"

namespace testmap::testing {

namespace {

std::string type_of(const nlohmann::json& v) {
  if (v.is_null()) return "null";
  if (v.is_boolean()) return "boolean";
  if (v.is_number_integer()) return "integer";
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  return "object";
}

bool type_matches(const std::string& want, const nlohmann::json& v) {
  if (want == "number") return v.is_number();
  return type_of(v) == want;
}

const nlohmann::json& resolve(const nlohmann::json& root, const nlohmann::json& node) {
  if (!node.is_object() || !node.contains("$ref")) return node;
  std::string ref = node["$ref"];
  if (ref.rfind("#/", 0) != 0) throw std::runtime_error("unsupported $ref " + ref);
  return resolve(root, root.at(nlohmann::json::json_pointer(ref.substr(1))));
}

void check(const nlohmann::json& root, const nlohmann::json& node, const nlohmann::json& v,
           const std::string& at, std::vector<std::string>& errors) {
  const auto& s = resolve(root, node);
  if (s.contains("type") && !type_matches(s["type"], v)) {
    errors.push_back(at + ": expected " + s["type"].get<std::string>() + ", got " + type_of(v));
    return;
  }
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& e : s["enum"]) found = found || e == v;
    if (!found) errors.push_back(at + ": value not in enum");
  }
  if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>()) {
    errors.push_back(at + ": below minimum");
  }
  if (s.contains("minLength") && v.is_string() &&
      v.get<std::string>().size() < s["minLength"].get<std::size_t>()) {
    errors.push_back(at + ": shorter than minLength");
  }
  if (v.is_object()) {
    if (s.contains("required")) {
      for (const auto& k : s["required"]) {
        if (!v.contains(k.get<std::string>())) errors.push_back(at + ": missing " + k.get<std::string>());
      }
    }
    const auto props = s.value("properties", nlohmann::json::object());
    for (const auto& [k, child] : v.items()) {
      if (props.contains(k)) {
        check(root, props[k], child, at + "/" + k, errors);
      } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
        errors.push_back(at + ": unexpected key " + k);
      }
    }
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) {
      errors.push_back(at + ": too few items");
    }
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) {
      errors.push_back(at + ": too many items");
    }
    if (s.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        check(root, s["items"], v[i], at + "/" + std::to_string(i), errors);
      }
    }
  }
}

}  // namespace

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("testmap-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
    }
  }
  return files;
}

std::string tree_digest(const fs::path& root) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  for (const auto& [path, content] : tree_contents(root)) {
    std::string header = path + '\0' + std::to_string(content.size()) + '\0';
    EVP_DigestUpdate(ctx, header.data(), header.size());
    EVP_DigestUpdate(ctx, content.data(), content.size());
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::istringstream in(read_file(p));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> schema_errors(const nlohmann::json& schema, const nlohmann::json& doc) {
  std::vector<std::string> errors;
  check(schema, schema, doc, "", errors);
  return errors;
}

fs::path fixture_repo(const std::string& name) {
  return fs::path(TESTMAP_FIXTURES_DIR) / "repos" / name;
}

std::vector<MappedTestCase> mine_fixture(const std::string& name, std::int64_t repo_id) {
  RepositoryMeta meta;
  meta.id = repo_id;
  meta.url = "repos/" + name;
  meta.language = {"Java"};
  return map_repository(java::parse_repository(fixture_repo(name)), meta).pairs;
}

MappedTestCase synthetic_pair(std::int64_t repo_id, const std::string& focal,
                              const std::string& focal_stmt) {
  MappedTestCase p;
  p.repository.id = repo_id;
  p.repository.url = "https://example.org/r" + std::to_string(repo_id);
  p.repository.language = {"Java"};

  p.focal_method.identifier = focal;
  p.focal_method.signature = "public int " + focal + "()";
  p.focal_method.body = "public int " + focal + "() {\n    return " + focal_stmt + ";\n}";
  p.focal_method.modifiers = {"public"};
  p.focal_method.line_span = {3, 5};
  p.focal_class.identifier = "Widget";
  p.focal_class.file = "src/main/java/Widget.java";
  p.focal_class.methods = {p.focal_method};

  std::string test_name = "test" + focal;
  test_name[4] = static_cast<char>(std::toupper(static_cast<unsigned char>(test_name[4])));
  p.test_case.identifier = test_name;
  p.test_case.signature = "public void " + test_name + "()";
  p.test_case.body = "@Test\npublic void " + test_name + "() {\n    assertEquals(" +
                     focal_stmt + ", w." + focal + "());\n}";
  p.test_case.is_testcase = true;
  p.test_case.invocations = {"assertEquals", focal};
  p.test_case.modifiers = {"public"};
  p.test_case.annotations = {"Test"};
  p.test_case.line_span = {7, 10};
  p.test_class.identifier = "WidgetTest";
  p.test_class.file = "src/test/java/WidgetTest.java";
  p.test_class.methods = {p.test_case};
  return p;
}

CommandResult run_cli(const std::string& args, const std::string& env) {
  TempDir io("cli");
  const fs::path out = io / "stdout";
  const fs::path err = io / "stderr";
  std::string cmd = (env.empty() ? "" : "env " + env + " ") + "'" + TESTMAP_CLI + "' " + args +
                    " >'" + out.string() + "' 2>'" + err.string() + "'";
  int status = std::system(cmd.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

}  // namespace testmap::testing

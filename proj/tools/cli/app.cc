#include "app.h"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "batch.h"
#include "cater/error.h"
#include "cater/serialization.h"
#include "session.h"
#include "settings.h"

namespace cater::cli {

namespace {

namespace fs = std::filesystem;

constexpr char kVersion[] = "0.1.0";

template <typename T>
void Optional(CLI::App* app, const std::string& name, std::optional<T>& target,
              const std::string& help) {
  app->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

// Parses CODE=VALUE assignments onto base.
WeightProfile ApplyAssignments(WeightProfile base, const std::vector<std::string>& pairs) {
  for (const std::string& p : pairs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) {
      throw InvalidInputError("weight assignment must look like CODE=VALUE: " + p);
    }
    const auto c = ParseCategory(p.substr(0, eq));
    if (!c) throw InvalidInputError("unknown category in " + p);
    base.Set(*c, Weight::FromString(p.substr(eq + 1)));
  }
  return base;
}

void PrintSummary(std::ostream& out, const SessionResult& s) {
  const ScoreReport& r = s.reconciled.report;
  for (Category c : kAllCategories) {
    const CategoryResult& cr = r.categories[c];
    out << Code(c) << ": score " << cr.score << ", ER " << cr.er_percent.ToString() << "%, "
        << cr.error_count << " error(s), " << cr.words_to_correct << " word(s) to correct\n";
  }
  out << "overall: " << r.overall_score << " (" << r.rating << "), ER "
      << r.overall_er_percent.ToString() << "%\n";
  if (!s.reconciled.discrepancies.empty()) {
    out << s.reconciled.discrepancies.size()
        << " self-reported figure(s) disagreed with the recomputed values\n";
  }
  out << "session: " << s.dir.string() << "\n";
}

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const InvalidInputError*>(&e)) return kExitInvalidInput;
  if (dynamic_cast<const BackendFailure*>(&e)) return kExitBackend;
  if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
  return kExitInternal;
}

struct Inputs {
  std::string source_path;
  std::string translation_path;
};

EvaluationRequest ReadPair(const Inputs& in, const Settings& settings) {
  if (in.source_path == "-" && in.translation_path == "-") {
    throw InvalidInputError("only one of --source and --translation may read stdin");
  }
  std::string source = TrimTrailing(ReadFile(in.source_path));
  std::string translation = TrimTrailing(ReadFile(in.translation_path));
  if (source.empty()) throw InvalidInputError("source text is empty");
  if (translation.empty()) throw InvalidInputError("translation text is empty");
  return MakeRequest(std::move(source), std::move(translation), settings);
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reference-free translation quality scoring with an LLM judge", "cater"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Flags flags;
  Optional(&app, "--config", flags.config_file, "JSON config file");
  Optional(&app, "--backend", flags.backend, "live or replay");
  Optional(&app, "--endpoint", flags.endpoint, "Chat completions URL");
  Optional(&app, "--model", flags.model, "Model name sent to the endpoint");
  Optional(&app, "--api-key-env", flags.api_key_env,
           "Environment variable holding the API key");
  Optional(&app, "--replay-dir", flags.replay_dir, "Replay fixture directory");
  Optional(&app, "--weights-file", flags.weights_file, "JSON object of weight overrides");
  Optional(&app, "--word-count-policy", flags.word_count_policy,
           "whitespace, unicode, cjk or explicit:N");
  Optional(&app, "--template", flags.template_id, "Prompt template id");
  Optional(&app, "--domain-notes", flags.domain_notes, "Extra instructions for the judge");
  Optional(&app, "--parallel", flags.parallel, "Concurrent backend calls in batch mode");
  app.add_flag("--record", flags.record, "Store live responses in the replay directory");
  app.add_flag("--reask", flags.reask, "Re-ask once when the response does not parse");

  std::vector<std::string> weight_pairs;
  auto add_weight_pairs = [&](CLI::App* cmd) {
    cmd->add_option("--weight", weight_pairs, "Weight override CODE=VALUE (repeatable)");
  };
  auto settings = [&] {
    Settings s = ResolveSettings(flags);
    s.weights = ApplyAssignments(s.weights, weight_pairs);
    return s;
  };

  Inputs inputs;
  std::string out_dir = "sessions";
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate one source/translation pair");
  evaluate->add_option("--source", inputs.source_path, "Source text file or -")->required();
  evaluate->add_option("--translation", inputs.translation_path, "Translation file or -")
      ->required();
  evaluate->add_option("--out", out_dir, "Directory that receives the session")->capture_default_str();
  add_weight_pairs(evaluate);

  std::string batch_input;
  bool strict = false;
  auto* batch = app.add_subcommand("batch", "Evaluate a JSON Lines batch");
  batch->add_option("input", batch_input, "JSONL file")->required();
  batch->add_option("--out", out_dir, "Output directory")->required();
  batch->add_flag("--strict", strict, "Exit 4 when any record fails");
  add_weight_pairs(batch);

  bool fold_case = false;
  auto* compare = app.add_subcommand("compare", "Evaluate a batch and compare with BLEU/TER");
  compare->add_option("input", batch_input, "JSONL file")->required();
  compare->add_option("--out", out_dir, "Output directory")->required();
  compare->add_flag("--strict", strict, "Exit 4 when any record fails");
  compare->add_flag("--case-insensitive", fold_case, "Case-fold before BLEU/TER");
  add_weight_pairs(compare);

  std::string rescore_path;
  std::optional<std::string> rescore_request;
  std::optional<std::string> rescore_out;
  auto* rescore = app.add_subcommand("rescore", "Recompute a stored evaluation offline");
  rescore->add_option("session", rescore_path, "Session directory or parsed.json")->required();
  Optional(rescore, "--request", rescore_request, "request.json for a bare parsed.json");
  Optional(rescore, "--out", rescore_out, "Write the report here instead of stdout");
  add_weight_pairs(rescore);

  auto* weights = app.add_subcommand("weights", "Show or edit weight profiles");
  weights->require_subcommand(1);
  auto* weights_show = weights->add_subcommand("show", "Print the effective profile");
  add_weight_pairs(weights_show);
  std::string profile_path;
  std::vector<std::string> assignments;
  auto* weights_set = weights->add_subcommand("set", "Write a profile file");
  weights_set->add_option("file", profile_path, "Profile file to create or update")
      ->required();
  weights_set->add_option("assignments", assignments, "CODE=VALUE pairs")->required();

  std::string csv_input;
  std::string jsonl_output = "-";
  auto* convert = app.add_subcommand("convert", "Convert a CSV batch to JSON Lines");
  convert->add_option("input", csv_input, "CSV file")->required();
  convert->add_option("-o,--output", jsonl_output, "JSONL output, - for stdout")->capture_default_str();

  std::optional<std::string> store_response;
  auto* prompt = app.add_subcommand("prompt", "Print the prompt an evaluation would send");
  prompt->add_option("--source", inputs.source_path, "Source text file or -")->required();
  prompt->add_option("--translation", inputs.translation_path, "Translation file or -")
      ->required();
  Optional(prompt, "--store-response", store_response,
           "Save this response file as the replay fixture for the prompt");
  add_weight_pairs(prompt);

  try {
    std::vector<std::string> argv(args.rbegin(), args.rend());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (*evaluate) {
      const Settings s = settings();
      const EvaluationRequest req = ReadPair(inputs, s);
      ValidateRequest(req);
      auto backend = MakeBackend(s);
      const fs::path dir = NewSessionDir(out_dir, BuildPrompt(req));
      try {
        PrintSummary(out, RunSession(req, *backend, s.reask, dir));
      } catch (const std::exception&) {
        if (fs::exists(dir)) err << "session kept for audit: " << dir.string() << "\n";
        throw;
      }
      return kExitOk;
    }

    if (*batch || *compare) {
      const Settings s = settings();
      const std::vector<BatchRecord> records = ParseBatch(ReadFile(batch_input));
      auto backend = MakeBackend(s);
      const auto outcomes = RunBatch(records, s, *backend, out_dir);
      WriteBatchSummaries(outcomes, out_dir);
      std::size_t failed = 0;
      for (const RecordOutcome& o : outcomes) {
        if (o.ok()) continue;
        ++failed;
        err << o.id << ": " << o.error_kind << ": " << o.error << "\n";
      }
      if (*compare) {
        CompareOptions options;
        options.policy = s.word_count_policy;
        options.fold_case = fold_case;
        const auto rows = WriteComparison(records, outcomes, options, out_dir);
        out << rows.size() << " row(s) written to "
            << (fs::path(out_dir) / "comparison.csv").string() << "\n";
      }
      out << (outcomes.size() - failed) << " ok, " << failed << " failed\n";
      return strict && failed > 0 ? kExitParse : kExitOk;
    }

    if (*rescore) {
      RescoreInput in = LoadRescoreInput(
          rescore_path, rescore_request ? std::optional<fs::path>(*rescore_request)
                                        : std::nullopt);
      // Only explicit flags change the stored request.
      if (flags.weights_file) {
        in.request.weight_profile =
            ApplyWeightOverrides(in.request.weight_profile, ReadFile(*flags.weights_file));
      }
      in.request.weight_profile = ApplyAssignments(in.request.weight_profile, weight_pairs);
      if (flags.word_count_policy) {
        in.request.word_count_policy = WordCountPolicy::Parse(*flags.word_count_policy);
      }
      const ReconcileResult result = Reconcile(in.parsed, in.request);
      const std::string json = ReportToJson(result.report, result.discrepancies);
      if (rescore_out) {
        WriteFile(*rescore_out, json);
      } else {
        out << json;
      }
      return kExitOk;
    }

    if (*weights_show) {
      out << WeightsToJson(settings().weights);
      return kExitOk;
    }

    if (*weights_set) {
      WeightProfile base;
      if (fs::exists(profile_path)) {
        base = ApplyWeightOverrides(base, ReadFile(profile_path));
      }
      const WeightProfile updated = ApplyAssignments(base, assignments);
      WriteFile(profile_path, WeightsToJson(updated));
      out << WeightsToJson(updated);
      return kExitOk;
    }

    if (*convert) {
      const std::string jsonl = ConvertCsvToJsonl(ReadFile(csv_input));
      if (jsonl_output == "-") {
        out << jsonl;
      } else {
        WriteFile(jsonl_output, jsonl);
      }
      return kExitOk;
    }

    if (*prompt) {
      const Settings s = settings();
      const EvaluationRequest req = ReadPair(inputs, s);
      ValidateRequest(req);
      const std::string text = BuildPrompt(req);
      out << text;
      const std::string key = ReplayStore::KeyFor(text);
      err << "prompt sha256: " << key << "\n";
      if (store_response) {
        ReplayStore(s.replay_dir).PutByKey(key, ReadFile(*store_response));
        err << "stored " << ReplayStore(s.replay_dir).PathFor(key).string() << "\n";
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  }
  return kExitInternal;
}

}  // namespace cater::cli

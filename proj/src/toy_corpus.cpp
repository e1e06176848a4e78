#include "airdecode/toy_corpus.hpp"

#include <cmath>
#include <unordered_set>

#include "airdecode/sampling.hpp"

namespace airdecode {

namespace {

const std::vector<std::string> kDeterminers = {"the", "a", "this", "that", "every", "some"};

const std::vector<std::string> kPronouns = {"it", "everything", "nothing", "everyone"};

const std::vector<std::string> kNouns = {
    "movie",     "film",     "story",      "plot",       "actor",     "actress",
    "director",  "scene",    "script",     "dialogue",   "ending",    "beginning",
    "character", "cast",     "soundtrack", "music",      "camera",    "picture",
    "screenplay", "audience", "critic",     "review",     "theater",   "sequel",
    "drama",     "comedy",   "thriller",   "documentary", "animation", "pacing",
    "tone",      "style",    "message",    "theme",      "idea",      "concept",
    "moment",    "twist",    "journey",    "romance",    "adventure", "mystery",
    "villain",   "hero",     "heroine",    "narrative",  "production", "budget",
    "effects",   "makeup",   "costume",    "setting",    "location",  "atmosphere",
    "rhythm",    "voice",    "humor",      "suspense",   "premise",   "finale",
    "montage",   "subplot",  "casting",    "lighting",   "editing",   "framing",
    "symbolism", "texture",  "imagery",    "structure"};

const std::vector<std::string> kVerbs = {
    "was",    "seemed",   "felt",     "looked",   "appeared", "sounded",
    "became", "remained", "proved",   "turned",   "stayed",   "kept",
    "grew",   "ended",    "started",  "played",   "moved",    "developed",
    "unfolded", "continued", "landed", "settled",  "finished", "opened"};

const std::vector<std::string> kAdverbs = {
    "really", "truly",    "quite",    "rather",  "very",    "simply",
    "utterly", "fairly",  "somewhat", "genuinely", "honestly", "clearly",
    "surely", "almost",   "entirely", "deeply"};

const std::vector<std::string> kConnectors = {"and",     "but", "yet", "while",
                                              "though", "because", "so", "then"};

const std::vector<std::string> kNeutralAdjs = {
    "long",    "short",   "slow",    "fast",    "quiet",   "loud",     "big",
    "small",   "new",     "old",     "early",   "late",    "simple",   "complex",
    "modern",  "classic", "local",   "foreign", "recent",  "familiar", "strange",
    "typical", "common",  "unusual", "ordinary", "minor",  "steady",   "plain"};

// Strong attribute tiers: fill the templates' attribute slots.
const std::vector<std::string> kPositiveStrong = {
    "good",      "great",      "wonderful",  "beautiful",  "brilliant",  "amazing",
    "excellent", "lovely",     "superb",     "delightful", "charming",   "inspiring",
    "powerful",  "stunning",   "impressive", "graceful",   "magnificent", "marvelous",
    "splendid",  "dazzling",   "exquisite",  "sublime",    "radiant",    "glorious",
    "enchanting", "breathtaking", "masterful", "flawless",  "luminous",   "uplifting"};

const std::vector<std::string> kNegativeStrong = {
    "bad",       "awful",     "terrible",  "horrible",  "boring",    "dreadful",
    "ugly",      "painful",   "dull",      "tedious",   "annoying",  "clumsy",
    "bland",     "shallow",   "messy",     "grating",   "dismal",    "wretched",
    "lifeless",  "tiresome",  "vulgar",    "ghastly",   "insufferable", "atrocious",
    "abysmal",   "revolting", "joyless",   "dreary",    "hideous",   "unbearable"};

// Flavor tiers: rare words sprinkled into random positions, only mildly
// class-skewed.
const std::vector<std::string> kPositiveFlavor = {
    "gem", "delight", "triumph", "marvel", "wonder", "treasure", "grace", "charm", "spark",
    "glow", "warmth", "bliss", "splendor", "elegance", "poetry", "magic", "finesse", "verve",
    "radiance", "harmony", "rapture", "euphoria", "artistry", "brilliance"};

const std::vector<std::string> kNegativeFlavor = {
    "mess", "bore", "chore", "slog", "dud", "flop", "drag", "misfire", "letdown", "eyesore",
    "racket", "blunder", "fiasco", "debacle", "travesty", "muddle", "drivel", "tedium",
    "monotony", "clutter", "gloom", "grime", "misery", "drudgery"};

std::vector<std::string> combine(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

enum class Slot { Det, Pron, Noun, Verb, Adv, Conn, Neu, Attr };

struct Template {
  std::vector<Slot> slots;
  double weight;
};

const std::vector<Template>& templates() {
  static const std::vector<Template> t = {
      {{Slot::Det, Slot::Noun, Slot::Verb, Slot::Adv, Slot::Attr}, 0.20},
      {{Slot::Det, Slot::Noun, Slot::Verb, Slot::Attr, Slot::Conn, Slot::Adv, Slot::Attr}, 0.16},
      {{Slot::Pron, Slot::Verb, Slot::Det, Slot::Attr, Slot::Noun}, 0.13},
      {{Slot::Det, Slot::Attr, Slot::Noun, Slot::Verb, Slot::Det, Slot::Neu, Slot::Noun}, 0.12},
      {{Slot::Det, Slot::Noun, Slot::Verb, Slot::Neu, Slot::Conn, Slot::Det, Slot::Noun,
        Slot::Verb, Slot::Attr},
       0.12},
      {{Slot::Det, Slot::Noun, Slot::Verb, Slot::Adv, Slot::Neu}, 0.10},
      {{Slot::Pron, Slot::Verb, Slot::Adv, Slot::Attr, Slot::Conn, Slot::Det, Slot::Noun,
        Slot::Verb, Slot::Attr},
       0.10},
      {{Slot::Det, Slot::Noun, Slot::Conn, Slot::Det, Slot::Noun, Slot::Verb, Slot::Adv,
        Slot::Attr},
       0.07},
  };
  return t;
}

// Cumulative Zipf table: P(rank i) proportional to 1/(i+1)^s.
std::vector<double> zipf_cdf(std::size_t n, double s) {
  std::vector<double> cdf(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += 1.0 / std::pow(static_cast<double>(i + 1), s);
    cdf[i] = sum;
  }
  for (double& x : cdf) x /= sum;
  return cdf;
}

std::size_t draw(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform01();
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    if (u < cdf[i]) return i;
  }
  return cdf.size() - 1;
}

struct Sampler {
  const ToyCorpusConfig& config;
  std::vector<double> det_cdf, pron_cdf, noun_cdf, verb_cdf, adv_cdf, conn_cdf, neu_cdf,
      strong_cdf, template_cdf;

  explicit Sampler(const ToyCorpusConfig& c) : config(c) {
    det_cdf = zipf_cdf(kDeterminers.size(), c.common_zipf);
    pron_cdf = zipf_cdf(kPronouns.size(), c.common_zipf);
    noun_cdf = zipf_cdf(kNouns.size(), c.common_zipf);
    verb_cdf = zipf_cdf(kVerbs.size(), c.common_zipf);
    adv_cdf = zipf_cdf(kAdverbs.size(), c.common_zipf);
    conn_cdf = zipf_cdf(kConnectors.size(), c.common_zipf);
    neu_cdf = zipf_cdf(kNeutralAdjs.size(), c.common_zipf);
    strong_cdf = zipf_cdf(kPositiveStrong.size(), c.strong_zipf);
    template_cdf.resize(templates().size());
    double sum = 0.0;
    for (std::size_t i = 0; i < templates().size(); ++i) {
      sum += templates()[i].weight;
      template_cdf[i] = sum;
    }
    for (double& x : template_cdf) x /= sum;
  }

  void append_clause(bool positive_class, Rng& rng, std::vector<std::string>& words) const {
    const Template& tpl = templates()[draw(template_cdf, rng)];
    const std::size_t clause_start = words.size();
    for (Slot slot : tpl.slots) {
      switch (slot) {
        case Slot::Det: words.push_back(kDeterminers[draw(det_cdf, rng)]); break;
        case Slot::Pron: words.push_back(kPronouns[draw(pron_cdf, rng)]); break;
        case Slot::Noun: words.push_back(kNouns[draw(noun_cdf, rng)]); break;
        case Slot::Verb: words.push_back(kVerbs[draw(verb_cdf, rng)]); break;
        case Slot::Adv: words.push_back(kAdverbs[draw(adv_cdf, rng)]); break;
        case Slot::Conn: words.push_back(kConnectors[draw(conn_cdf, rng)]); break;
        case Slot::Neu: words.push_back(kNeutralAdjs[draw(neu_cdf, rng)]); break;
        case Slot::Attr: {
          if (rng.uniform01() < config.neutral_slot_rate) {
            words.push_back(kNeutralAdjs[draw(neu_cdf, rng)]);
          } else {
            bool from_positive = positive_class;
            if (rng.uniform01() < config.cross_class_rate) from_positive = !from_positive;
            const auto& list = from_positive ? kPositiveStrong : kNegativeStrong;
            words.push_back(list[draw(strong_cdf, rng)]);
          }
          break;
        }
      }
    }
    if (rng.uniform01() < config.flourish_rate) {
      bool from_positive = positive_class;
      if (rng.uniform01() < config.filler_cross_rate) from_positive = !from_positive;
      const auto& pool = from_positive ? kPositiveFlavor : kNegativeFlavor;
      const auto& word = pool[static_cast<std::size_t>(rng.next_u64() % pool.size())];
      const auto pos = clause_start + static_cast<std::size_t>(
                                          rng.next_u64() % (words.size() - clause_start + 1));
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(pos), word);
    }
  }

  // A document is a chain of clauses joined by connectors, long enough that
  // a length-50 continuation stays inside the training distribution.
  std::string make_doc(bool positive_class, Rng& rng) const {
    const int n_clauses = 4 + static_cast<int>(rng.next_u64() % 4);  // 4..7
    std::vector<std::string> words;
    words.reserve(static_cast<std::size_t>(n_clauses) * 8);
    for (int c = 0; c < n_clauses; ++c) {
      if (c > 0) words.push_back(kConnectors[draw(conn_cdf, rng)]);
      append_clause(positive_class, rng, words);
    }
    std::string doc;
    for (const auto& w : words) {
      if (!doc.empty()) doc += ' ';
      doc += w;
    }
    return doc;
  }
};

}  // namespace

const std::vector<std::string>& toy_positive_words() {
  static const std::vector<std::string> words = combine(kPositiveStrong, kPositiveFlavor);
  return words;
}

const std::vector<std::string>& toy_negative_words() {
  static const std::vector<std::string> words = combine(kNegativeStrong, kNegativeFlavor);
  return words;
}

ToyCorpus make_toy_corpus(const ToyCorpusConfig& config) {
  Sampler sampler(config);
  ToyCorpus corpus;

  Rng pos_rng(derive_seed(config.seed, 1));
  Rng neg_rng(derive_seed(config.seed, 2));
  Rng eval_rng(derive_seed(config.seed, 3));

  corpus.positive_docs.reserve(static_cast<std::size_t>(config.docs_per_class));
  corpus.negative_docs.reserve(static_cast<std::size_t>(config.docs_per_class));
  for (int i = 0; i < config.docs_per_class; ++i) {
    corpus.positive_docs.push_back(sampler.make_doc(true, pos_rng));
    corpus.negative_docs.push_back(sampler.make_doc(false, neg_rng));
  }
  // Held-out union-distribution documents for the evaluation model.
  corpus.eval_docs.reserve(static_cast<std::size_t>(config.eval_docs));
  for (int i = 0; i < config.eval_docs; ++i) {
    const bool positive = eval_rng.uniform01() < 0.5;
    corpus.eval_docs.push_back(sampler.make_doc(positive, eval_rng));
  }

  corpus.prompts = {"the movie",    "the film",       "this story",  "the script",
                    "it",           "the soundtrack", "every scene", "the ending",
                    "that director", "the plot"};
  return corpus;
}

double attribute_word_rate(const std::vector<std::vector<std::string>>& texts,
                           const std::vector<std::string>& words) {
  std::unordered_set<std::string> set(words.begin(), words.end());
  std::size_t hits = 0, total = 0;
  for (const auto& text : texts) {
    for (const auto& tok : text) {
      ++total;
      if (set.count(tok)) ++hits;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace airdecode

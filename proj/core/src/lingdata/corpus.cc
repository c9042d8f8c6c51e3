// Copyright (c) 2026 The Prosody TTS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "prosody/lingdata/corpus.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <thread>

#include "prosody/common/error.h"
#include "prosody/common/rng.h"

namespace prosody::lingdata {

namespace {

// Single-reading character pools, "char:pinyin" separated by spaces.
constexpr const char* kNounChars =
    "人:ren2 山:shan1 水:shui3 火:huo3 木:mu4 月:yue4 日:ri4 风:feng1 雨:yu3 "
    "花:hua1 草:cao3 树:shu4 鸟:niao3 鱼:yu2 马:ma3 牛:niu2 羊:yang2 猫:mao1 "
    "狗:gou3 书:shu1 车:che1 门:men2 家:jia1 国:guo2 城:cheng2 路:lu4 桥:qiao2 "
    "河:he2 海:hai3 江:jiang1 湖:hu2 田:tian2 土:tu3 石:shi2 金:jin1 银:yin2 "
    "铁:tie3 钱:qian2 米:mi3 面:mian4 茶:cha2 酒:jiu3 饭:fan4 菜:cai4 肉:rou4 "
    "蛋:dan4 瓜:gua1 豆:dou4 衣:yi1 帽:mao4 鞋:xie2 包:bao1 桌:zhuo1 "
    "椅:yi3 床:chuang2 灯:deng1 窗:chuang1 墙:qiang2 房:fang2 楼:lou2 园:yuan2 "
    "校:xiao4 店:dian4 商:shang1 市:shi4 村:cun1 镇:zhen4 县:xian4 省:sheng3 "
    "京:jing1 东:dong1 西:xi1 南:nan2 北:bei3 春:chun1 夏:xia4 秋:qiu1 冬:dong1 "
    "年:nian2 师:shi1 生:sheng1 工:gong1 农:nong2 医:yi1 兵:bing1 友:you3 "
    "妈:ma1 爸:ba4 哥:ge1 姐:jie3 弟:di4 妹:mei4 儿:er2 女:nv3 男:nan2 孩:hai2 "
    "王:wang2 李:li3 刘:liu2 陈:chen2 杨:yang2 黄:huang2 赵:zhao4 吴:wu2 "
    "声:sheng1 心:xin1 手:shou3 口:kou3 眼:yan3 耳:er3 脚:jiao3 星:xing1 "
    "云:yun2 雪:xue3 电:dian4 话:hua4 字:zi4 歌:ge1 球:qiu2 票:piao4 信:xin4";

constexpr const char* kVerbChars =
    "走:zou3 跑:pao3 飞:fei1 吃:chi1 看:kan4 听:ting1 说:shuo1 读:du2 写:xie3 "
    "买:mai3 卖:mai4 送:song4 开:kai1 关:guan1 洗:xi3 做:zuo4 用:yong4 找:zhao3 "
    "等:deng3 坐:zuo4 站:zhan4 来:lai2 去:qu4 到:dao4 回:hui2 进:jin4 出:chu1 "
    "拿:na2 放:fang4 打:da3 唱:chang4 跳:tiao4 笑:xiao4 哭:ku1 想:xiang3 爱:ai4 "
    "帮:bang1 住:zhu4 画:hua4 修:xiu1 搬:ban1 接:jie1 追:zhui1 推:tui1 拉:la1 "
    "借:jie4 问:wen4 答:da2 谈:tan2 寄:ji4 取:qu3 收:shou1 停:ting2 选:xuan3 "
    "学:xue2 练:lian4 玩:wan2 寻:xun2 救:jiu4 建:jian4 造:zao4 认:ren4 "
    "喜:xi3 欢:huan1 准:zhun3 备:bei4";

constexpr const char* kAdjChars =
    "大:da4 小:xiao3 高:gao1 低:di1 新:xin1 旧:jiu4 红:hong2 白:bai2 黑:hei1 "
    "绿:lv4 蓝:lan2 美:mei3 快:kuai4 慢:man4 热:re4 冷:leng3 远:yuan3 近:jin4 "
    "多:duo1 忙:mang2 静:jing4 亮:liang4 甜:tian2 苦:ku3 酸:suan1 软:ruan3 "
    "硬:ying4 深:shen1 浅:qian3 宽:kuan1 窄:zhai3 短:duan3 胖:pang4 瘦:shou4 "
    "净:jing4 香:xiang1 轻:qing1 真:zhen1 错:cuo4 清:qing1 漂:piao4 聪:cong1 "
    "勇:yong3 安:an1 暖:nuan3";

constexpr const char* kAdvChars =
    "很:hen3 也:ye3 又:you4 再:zai4 就:jiu4 才:cai2 已:yi3 经:jing1 刚:gang1 "
    "常:chang2 总:zong3 非:fei1 最:zui4 太:tai4 先:xian1 正:zheng4 仍:reng2 "
    "偶:ou3 终:zhong1 互:hu4 是:shi4 真:zhen1";

constexpr const char* kNumChars =
    "一:yi1 二:er4 三:san1 四:si4 五:wu3 六:liu4 七:qi1 八:ba1 九:jiu3 十:shi2 "
    "百:bai3 千:qian1 万:wan4 两:liang3 几:ji3";

constexpr const char* kMeasureChars =
    "个:ge4 本:ben3 条:tiao2 件:jian4 辆:liang4 位:wei4 次:ci4 双:shuang1 "
    "块:kuai4 杯:bei1 碗:wan3 瓶:ping2 棵:ke1 座:zuo4 头:tou2 匹:pi3 张:zhang1 "
    "把:ba3";

constexpr const char* kPrepChars =
    "在:zai4 从:cong2 向:xiang4 被:bei4 比:bi3 跟:gen1 往:wang3 对:dui4 离:li2 "
    "把:ba3";

// Two-character conjunctions, "chars:syl1,syl2".
constexpr const char* kConjWords =
    "但是:dan4,shi4 所以:suo3,yi3 而且:er2,qie3 可是:ke3,shi4 然后:ran2,hou4 "
    "如果:ru2,guo3 虽然:sui1,ran2 于是:yu2,shi4 不过:bu4,guo4 并且:bing4,qie3";

struct PolyphoneDef {
  const char* ch;
  const char* pos;
  std::vector<std::string> readings;
};

const std::vector<PolyphoneDef>& PolyphoneDefs() {
  static const std::vector<PolyphoneDef> defs = {
      {"行", "V", {"xing2", "hang2"}},   {"长", "ADJ", {"chang2", "zhang3"}},
      {"还", "V", {"hai2", "huan2"}},    {"重", "ADJ", {"zhong4", "chong2"}},
      {"数", "V", {"shu4", "shu3"}},     {"好", "ADJ", {"hao3", "hao4"}},
      {"调", "V", {"tiao2", "diao4"}},   {"乐", "ADJ", {"le4", "yue4"}},
      {"种", "V", {"zhong3", "zhong4"}}, {"少", "ADJ", {"shao3", "shao4"}},
      {"觉", "V", {"jue2", "jiao4"}},    {"便", "ADJ", {"bian4", "pian2"}},
      {"教", "V", {"jiao1", "jiao4"}},   {"得", "V", {"de2", "dei3", "de5"}},
  };
  return defs;
}

std::vector<std::pair<std::string, std::string>> ParsePool(const char* pool) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream ss(pool);
  std::string item;
  while (ss >> item) {
    const auto colon = item.find(':');
    out.emplace_back(item.substr(0, colon), item.substr(colon + 1));
  }
  return out;
}

constexpr uint64_t kGrammarSeed = 20221101;

// Composes `count` distinct words of class `pos` from `pool`. Characters used
// as single-character words are kept out of longer words.
void ComposeWords(const std::vector<std::pair<std::string, std::string>>& pool,
                  int pos, int count, const std::vector<double>& length_weights,
                  std::set<std::string>& taken, std::vector<WordEntry>& out,
                  Rng& rng) {
  std::vector<size_t> order(pool.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
  const int singles = static_cast<int>(length_weights[0] * count + 0.5);
  const size_t reserved = std::min<size_t>(singles, pool.size() / 2);
  int made = 0;
  for (size_t k = 0; k < reserved && made < count; ++k) {
    const auto& [ch, py] = pool[order[k]];
    if (!taken.insert(ch).second) continue;
    out.push_back({ch, {ch}, {py}, pos, -1});
    ++made;
  }
  const std::vector<size_t> rest(order.begin() + reserved, order.end());
  double multi_total = 0;
  for (size_t l = 1; l < length_weights.size(); ++l) multi_total += length_weights[l];
  int guard = 0;
  while (made < count && ++guard < 100000) {
    double u = Uniform01(rng) * multi_total;
    size_t len = 2;
    for (size_t l = 1; l < length_weights.size(); ++l) {
      if (u < length_weights[l]) {
        len = l + 1;
        break;
      }
      u -= length_weights[l];
    }
    WordEntry w;
    w.pos = pos;
    for (size_t c = 0; c < len; ++c) {
      const auto& [ch, py] = pool[rest[rng() % rest.size()]];
      w.chars.push_back(ch);
      w.readings.push_back(py);
      w.text += ch;
    }
    if (!taken.insert(w.text).second) continue;
    out.push_back(std::move(w));
    ++made;
  }
}

void AddSingles(const std::vector<std::pair<std::string, std::string>>& pool, int pos,
                std::set<std::string>& taken, std::vector<WordEntry>& out) {
  for (const auto& [ch, py] : pool) {
    if (!taken.insert(ch).second) continue;
    out.push_back({ch, {ch}, {py}, pos, -1});
  }
}

}  // namespace

std::string_view BoundaryName(Boundary b) {
  switch (b) {
    case Boundary::kNone:
      return "NB";
    case Boundary::kPW:
      return "PW";
    case Boundary::kPPH:
      return "PPH";
    case Boundary::kIPH:
      return "IPH";
  }
  return "?";
}

Boundary ParseBoundary(std::string_view name) {
  if (name == "NB") return Boundary::kNone;
  if (name == "PW") return Boundary::kPW;
  if (name == "PPH") return Boundary::kPPH;
  if (name == "IPH") return Boundary::kIPH;
  Fail(ErrorCategory::kData, "unknown boundary label '" + std::string(name) + "'");
}

std::string AnnotatedSentence::Text() const {
  std::string out;
  for (const auto& c : chars) out += c;
  return out;
}

void AnnotatedSentence::Validate(int num_pos) const {
  const size_t n = chars.size();
  if (n == 0) Fail(ErrorCategory::kData, "empty sentence");
  if (pinyin.size() != n || seg_pos.size() != n || prosody.size() != n) {
    Fail(ErrorCategory::kData, "sentence '" + Text() + "': field lengths differ");
  }
  for (size_t i = 0; i < n; ++i) {
    if (seg_pos[i].pos < 0 || seg_pos[i].pos >= num_pos) {
      Fail(ErrorCategory::kData, "POS class out of range at position " + std::to_string(i));
    }
    if (!seg_pos[i].begin) {
      if (i == 0 || seg_pos[i - 1].pos != seg_pos[i].pos) {
        Fail(ErrorCategory::kData, "sentence '" + Text() +
                                       "': I tag does not continue a word at position " +
                                       std::to_string(i));
      }
    }
    if (pinyin[i] < 0) Fail(ErrorCategory::kData, "negative pinyin index");
  }
  if (prosody.back() != Boundary::kIPH) {
    Fail(ErrorCategory::kData, "sentence '" + Text() + "': last boundary is not IPH");
  }
  for (size_t i = 0; i + 1 < n; ++i) {
    if (prosody[i] >= Boundary::kPPH && !seg_pos[i + 1].begin) {
      Fail(ErrorCategory::kData, "sentence '" + Text() +
                                     "': phrase boundary inside a word at position " +
                                     std::to_string(i));
    }
  }
}

DurationParams DurationParams::Default() {
  DurationParams p;
  // kSpecial, kStop, kAffricate, kFricative, kSonorant, kGlide,
  // kSimpleFinal, kComplexFinal, kNasalFinal
  p.base_frames = {1.0, 3.0, 5.0, 5.0, 4.0, 3.0, 9.0, 11.0, 10.0};
  return p;
}

int CorpusSpec::PosId(const std::string& name) const {
  for (int i = 0; i < num_pos(); ++i) {
    if (pos_names[i] == name) return i;
  }
  Fail(ErrorCategory::kConfig, "unknown POS class '" + name + "'");
}

std::optional<int> CorpusSpec::FindWord(const std::string& text) const {
  for (size_t i = 0; i < words.size(); ++i) {
    if (words[i].text == text) return static_cast<int>(i);
  }
  return std::nullopt;
}

CorpusSpec CorpusSpec::Default() {
  CorpusSpec spec;
  spec.pos_names = {"N", "V", "ADJ", "ADV", "NUM", "M", "P", "CONJ"};
  const int n = 0, v = 1, adj = 2, adv = 3, num = 4, m = 5, p = 6, conj = 7;

  Rng rng(kGrammarSeed);
  std::set<std::string> taken;
  for (const auto& def : PolyphoneDefs()) taken.insert(def.ch);
  ComposeWords(ParsePool(kNounChars), n, 100, {0.3, 0.55, 0.15}, taken, spec.words, rng);
  ComposeWords(ParsePool(kVerbChars), v, 62, {0.6, 0.4}, taken, spec.words, rng);
  ComposeWords(ParsePool(kAdjChars), adj, 34, {0.6, 0.4}, taken, spec.words, rng);
  ComposeWords(ParsePool(kAdvChars), adv, 25, {0.5, 0.5}, taken, spec.words, rng);
  AddSingles(ParsePool(kNumChars), num, taken, spec.words);
  AddSingles(ParsePool(kMeasureChars), m, taken, spec.words);
  AddSingles(ParsePool(kPrepChars), p, taken, spec.words);
  {
    std::istringstream ss(kConjWords);
    std::string item;
    while (ss >> item) {
      const auto colon = item.find(':');
      WordEntry w;
      w.text = item.substr(0, colon);
      w.chars = SplitUtf8(w.text);
      std::istringstream syl(item.substr(colon + 1));
      std::string s;
      while (std::getline(syl, s, ',')) w.readings.push_back(s);
      w.pos = conj;
      taken.insert(w.text);
      spec.words.push_back(std::move(w));
    }
  }
  for (const auto& def : PolyphoneDefs()) {
    PolyphoneRule rule;
    rule.ch = def.ch;
    rule.readings = def.readings;
    rule.word = static_cast<int>(spec.words.size());
    spec.words.push_back({def.ch, {def.ch}, {""}, spec.PosId(def.pos),
                          static_cast<int>(spec.polyphones.size())});
    spec.polyphones.push_back(std::move(rule));
  }

  spec.templates = {
      {n, adv, v, n},
      {n, v, adj, n},
      {adj, n, adv, adj},
      {n, p, n, v, n},
      {num, m, n, v, n},
      {n, adv, v, num, m, n},
      {n, v, n, conj, n, adv, v},
      {p, n, n, v, adj, n},
      {n, adv, adj, conj, n, v, n},
      {n, v, num, m, adj, n},
      {adj, n, p, n, adv, v},
      {n, adv, v, n, conj, adv, v, adj, n},
      {n, n, adv, v, adj, n},
      {n, adv, v},
      {n, p, n, adv, v, n, conj, n, adv, adj},
      {num, m, adj, n, adv, v, n},
  };
  spec.prosody.pph_pairs = {{n, adv}, {n, v}, {n, p}, {n, n}, {adj, adv}};
  spec.prosody.iph_before = {conj};
  spec.prosody.max_phrase_chars = 8;

  // Trigger sets: five words of the class most often adjacent (in the
  // trigger direction) to the polyphone's class in the templates.
  auto adjacent_class = [&](int cls, PolyphoneRule::Direction dir) {
    std::map<int, int> counts;
    for (const auto& t : spec.templates) {
      for (size_t k = 0; k < t.size(); ++k) {
        if (t[k] != cls) continue;
        if (dir == PolyphoneRule::Direction::kNext && k + 1 < t.size()) ++counts[t[k + 1]];
        if (dir == PolyphoneRule::Direction::kPrev && k > 0) ++counts[t[k - 1]];
      }
    }
    int best = -1, best_count = 0;
    for (const auto& [c, cnt] : counts) {
      if (cnt > best_count) best = c, best_count = cnt;
    }
    return best;
  };
  auto pick_triggers = [&](int cls) {
    std::vector<int> pool;
    for (size_t i = 0; i < spec.words.size(); ++i) {
      if (spec.words[i].pos == cls && spec.words[i].polyphone < 0) {
        pool.push_back(static_cast<int>(i));
      }
    }
    std::set<int> chosen;
    while (chosen.size() < std::min<size_t>(5, pool.size())) {
      chosen.insert(pool[rng() % pool.size()]);
    }
    return chosen;
  };
  for (size_t i = 0; i < spec.polyphones.size(); ++i) {
    auto& rule = spec.polyphones[i];
    const int cls = spec.words[rule.word].pos;
    const auto dir = i % 2 == 0 ? PolyphoneRule::Direction::kNext
                                : PolyphoneRule::Direction::kPrev;
    rule.triggers.push_back({dir, pick_triggers(adjacent_class(cls, dir)), 1});
    if (rule.readings.size() > 2) {
      const auto other = dir == PolyphoneRule::Direction::kNext
                             ? PolyphoneRule::Direction::kPrev
                             : PolyphoneRule::Direction::kNext;
      rule.triggers.push_back({other, pick_triggers(adjacent_class(cls, other)), 2});
    }
  }
  return spec;
}

Lexicon CorpusSpec::BuildLexicon() const {
  Lexicon lex;
  for (const auto& w : words) {
    if (w.polyphone >= 0) continue;
    for (size_t c = 0; c < w.chars.size(); ++c) lex.Add(w.chars[c], {w.readings[c]});
  }
  for (const auto& rule : polyphones) lex.Add(rule.ch, rule.readings);
  return lex;
}

std::vector<std::string> CorpusSpec::UnreachablePolyphones() const {
  std::vector<std::string> out;
  for (const auto& rule : polyphones) {
    const int cls = words[rule.word].pos;
    for (const auto& trig : rule.triggers) {
      bool reachable = false;
      for (const auto& t : templates) {
        for (size_t k = 0; k < t.size() && !reachable; ++k) {
          if (t[k] != cls) continue;
          const long nb = trig.direction == PolyphoneRule::Direction::kNext
                              ? static_cast<long>(k) + 1
                              : static_cast<long>(k) - 1;
          if (nb < 0 || nb >= static_cast<long>(t.size())) continue;
          for (int w : trig.words) {
            if (words[w].pos == t[nb]) reachable = true;
          }
        }
      }
      if (!reachable) {
        out.push_back(rule.ch + " reading " + rule.readings[trig.reading] +
                      ": trigger context unreachable");
      }
    }
  }
  return out;
}

int ResolveReading(const CorpusSpec& spec, const std::vector<int>& word_seq, size_t i) {
  const WordEntry& w = spec.words.at(word_seq[i]);
  if (w.polyphone < 0) Fail(ErrorCategory::kData, "word '" + w.text + "' is not a polyphone");
  const PolyphoneRule& rule = spec.polyphones[w.polyphone];
  for (const auto& trig : rule.triggers) {
    std::optional<int> neighbour;
    if (trig.direction == PolyphoneRule::Direction::kNext && i + 1 < word_seq.size()) {
      neighbour = word_seq[i + 1];
    }
    if (trig.direction == PolyphoneRule::Direction::kPrev && i > 0) {
      neighbour = word_seq[i - 1];
    }
    if (neighbour && trig.words.count(*neighbour)) return trig.reading;
  }
  return rule.default_reading;
}

namespace {

AnnotatedSentence GenerateSentence(const CorpusSpec& spec,
                                   const std::vector<std::vector<int>>& plain_by_pos,
                                   const std::vector<std::vector<int>>& poly_by_pos,
                                   Rng& rng) {
  const auto& tmpl = spec.templates[rng() % spec.templates.size()];
  std::vector<int> seq;
  auto pick = [&](const std::vector<int>& v) { return v[rng() % v.size()]; };
  for (size_t k = 0; k < tmpl.size(); ++k) {
    const int cls = tmpl[k];
    int word = -1;
    // Bias toward the next-word trigger set of a preceding polyphone.
    if (!seq.empty() && spec.words[seq.back()].polyphone >= 0 &&
        Bernoulli(rng, spec.trigger_bias)) {
      const auto& rule = spec.polyphones[spec.words[seq.back()].polyphone];
      for (const auto& trig : rule.triggers) {
        if (trig.direction != PolyphoneRule::Direction::kNext) continue;
        std::vector<int> fits;
        for (int w : trig.words) {
          if (spec.words[w].pos == cls) fits.push_back(w);
        }
        if (!fits.empty()) word = pick(fits);
        break;
      }
    }
    if (word < 0 && !poly_by_pos[cls].empty() && Bernoulli(rng, spec.polyphone_slot_prob)) {
      word = pick(poly_by_pos[cls]);
      // Bias the previous word toward a previous-word trigger set.
      if (!seq.empty() && spec.words[seq.back()].polyphone < 0 &&
          Bernoulli(rng, spec.trigger_bias)) {
        const auto& rule = spec.polyphones[spec.words[word].polyphone];
        for (const auto& trig : rule.triggers) {
          if (trig.direction != PolyphoneRule::Direction::kPrev) continue;
          std::vector<int> fits;
          for (int w : trig.words) {
            if (spec.words[w].pos == tmpl[k - 1]) fits.push_back(w);
          }
          if (!fits.empty()) seq.back() = pick(fits);
          break;
        }
      }
    }
    if (word < 0) word = pick(plain_by_pos[cls]);
    seq.push_back(word);
  }

  AnnotatedSentence s;
  int since_break = 0;
  for (size_t j = 0; j < seq.size(); ++j) {
    const WordEntry& w = spec.words[seq[j]];
    const int reading = w.polyphone >= 0 ? ResolveReading(spec, seq, j) : 0;
    since_break += static_cast<int>(w.chars.size());
    Boundary end = Boundary::kPW;
    if (j + 1 == seq.size()) {
      end = Boundary::kIPH;
    } else {
      const int next_pos = spec.words[seq[j + 1]].pos;
      if (spec.prosody.iph_before.count(next_pos)) {
        end = Boundary::kIPH;
      } else if (spec.prosody.pph_pairs.count({w.pos, next_pos}) ||
                 since_break >= spec.prosody.max_phrase_chars) {
        end = Boundary::kPPH;
      }
    }
    if (end >= Boundary::kPPH) since_break = 0;
    for (size_t c = 0; c < w.chars.size(); ++c) {
      s.chars.push_back(w.chars[c]);
      s.pinyin.push_back(w.polyphone >= 0 ? reading : 0);
      s.seg_pos.push_back({w.pos, c == 0});
      s.prosody.push_back(c + 1 == w.chars.size() ? end : Boundary::kNone);
    }
  }
  return s;
}

}  // namespace

CorpusResult GenerateCorpus(const CorpusSpec& spec, size_t n, uint64_t seed, int threads) {
  if (n < 1) Fail(ErrorCategory::kInvalidArgument, "corpus size must be >= 1");
  if (spec.templates.empty()) Fail(ErrorCategory::kConfig, "grammar has no templates");
  std::vector<std::vector<int>> plain(spec.num_pos()), poly(spec.num_pos());
  for (size_t i = 0; i < spec.words.size(); ++i) {
    (spec.words[i].polyphone >= 0 ? poly : plain)[spec.words[i].pos].push_back(
        static_cast<int>(i));
  }
  for (const auto& t : spec.templates) {
    for (int cls : t) {
      if (plain[cls].empty()) {
        Fail(ErrorCategory::kConfig, "POS class " + spec.pos_names[cls] + " has no words");
      }
    }
  }

  CorpusResult result;
  result.sentences.resize(n);
  auto work = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      Rng rng = MakeRng(seed, i);
      result.sentences[i] = GenerateSentence(spec, plain, poly, rng);
    }
  };
  threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const size_t b = t * chunk;
      const size_t e = std::min(n, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }

  result.warnings = spec.UnreachablePolyphones();
  // Readings that never surfaced in this corpus.
  std::map<std::string, std::set<int>> seen;
  for (const auto& s : result.sentences) {
    const auto word_seq = SegmentWords(spec, s);
    size_t c = 0;
    for (int w : word_seq) {
      if (spec.words[w].polyphone >= 0) seen[spec.words[w].text].insert(s.pinyin[c]);
      c += spec.words[w].chars.size();
    }
  }
  for (const auto& rule : spec.polyphones) {
    for (size_t r = 0; r < rule.readings.size(); ++r) {
      if (!seen[rule.ch].count(static_cast<int>(r))) {
        result.warnings.push_back(rule.ch + " reading " + rule.readings[r] +
                                  ": not observed in corpus");
      }
    }
  }
  return result;
}

std::vector<int> SegmentWords(const CorpusSpec& spec, const AnnotatedSentence& s) {
  std::vector<int> seq;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    auto w = spec.FindWord(current);
    if (!w) Fail(ErrorCategory::kData, "word '" + current + "' not in grammar vocabulary");
    seq.push_back(*w);
    current.clear();
  };
  for (size_t i = 0; i < s.size(); ++i) {
    if (s.seg_pos[i].begin) flush();
    current += s.chars[i];
  }
  flush();
  return seq;
}

}  // namespace prosody::lingdata

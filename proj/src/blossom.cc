// Copyright 2026 The hhqec Authors
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

#include "hhqec/blossom.h"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace hhqec {

namespace {

// Port of the classic primal-dual formulation. Weights are doubled internally so every dual
// update stays integral.
class Matcher {
   public:
    Matcher(const std::vector<std::tuple<int, int, int64_t>> &edges, bool maxcard) : maxcard_(maxcard) {
        nedge_ = (int)edges.size();
        nv_ = 0;
        for (auto &[i, j, w] : edges) {
            if (i < 0 || j < 0 || i == j) throw std::invalid_argument("bad matching edge");
            nv_ = std::max({nv_, i + 1, j + 1});
        }
        int64_t maxw = 0;
        for (auto &[i, j, w] : edges) {
            ei_.push_back(i);
            ej_.push_back(j);
            ew_.push_back(2 * w);
            maxw = std::max(maxw, 2 * w);
        }
        endpoint_.resize(2 * nedge_);
        for (int p = 0; p < 2 * nedge_; p++) endpoint_[p] = p % 2 ? ej_[p / 2] : ei_[p / 2];
        neighbend_.assign(nv_, {});
        for (int k = 0; k < nedge_; k++) {
            neighbend_[ei_[k]].push_back(2 * k + 1);
            neighbend_[ej_[k]].push_back(2 * k);
        }
        mate_.assign(nv_, -1);
        label_.assign(2 * nv_, 0);
        labelend_.assign(2 * nv_, -1);
        inblossom_.resize(nv_);
        for (int v = 0; v < nv_; v++) inblossom_[v] = v;
        parent_.assign(2 * nv_, -1);
        childs_.assign(2 * nv_, {});
        base_.assign(2 * nv_, -1);
        for (int v = 0; v < nv_; v++) base_[v] = v;
        endps_.assign(2 * nv_, {});
        bestedge_.assign(2 * nv_, -1);
        bestedges_.assign(2 * nv_, {});
        hasbest_.assign(2 * nv_, false);
        for (int b = nv_; b < 2 * nv_; b++) unused_.push_back(b);
        dual_.assign(2 * nv_, 0);
        for (int v = 0; v < nv_; v++) dual_[v] = maxw;
        allowedge_.assign(nedge_, false);
    }

    std::vector<int> run() {
        if (nedge_ == 0) return {};
        for (int t = 0; t < nv_; t++) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (int b = nv_; b < 2 * nv_; b++) {
                bestedges_[b].clear();
                hasbest_[b] = false;
            }
            std::fill(allowedge_.begin(), allowedge_.end(), false);
            queue_.clear();
            for (int v = 0; v < nv_; v++) {
                if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
            }
            bool augmented = false;
            while (true) {
                while (!queue_.empty() && !augmented) {
                    int v = queue_.back();
                    queue_.pop_back();
                    for (int p : neighbend_[v]) {
                        int k = p / 2;
                        int w = endpoint_[p];
                        if (inblossom_[v] == inblossom_[w]) continue;
                        int64_t kslack = 0;
                        if (!allowedge_[k]) {
                            kslack = slack(k);
                            if (kslack <= 0) allowedge_[k] = true;
                        }
                        if (allowedge_[k]) {
                            if (label_[inblossom_[w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label_[inblossom_[w]] == 1) {
                                int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[w] == 0) {
                                label_[w] = 2;
                                labelend_[w] = p ^ 1;
                            }
                        } else if (label_[inblossom_[w]] == 1) {
                            int b = inblossom_[v];
                            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
                        } else if (label_[w] == 0) {
                            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
                        }
                    }
                }
                if (augmented) break;

                int deltatype = -1, deltaedge = -1, deltablossom = -1;
                int64_t delta = 0;
                if (!maxcard_) {
                    deltatype = 1;
                    delta = *std::min_element(dual_.begin(), dual_.begin() + nv_);
                }
                for (int v = 0; v < nv_; v++) {
                    if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                        int64_t d = slack(bestedge_[v]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[v];
                        }
                    }
                }
                for (int b = 0; b < 2 * nv_; b++) {
                    if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                        int64_t ks = slack(bestedge_[b]);
                        assert(ks % 2 == 0);
                        int64_t d = ks / 2;
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[b];
                        }
                    }
                }
                for (int b = nv_; b < 2 * nv_; b++) {
                    if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 && (deltatype == -1 || dual_[b] < delta)) {
                        delta = dual_[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    deltatype = 1;
                    delta = std::max<int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + nv_));
                }
                for (int v = 0; v < nv_; v++) {
                    int l = label_[inblossom_[v]];
                    if (l == 1) dual_[v] -= delta;
                    else if (l == 2) dual_[v] += delta;
                }
                for (int b = nv_; b < 2 * nv_; b++) {
                    if (base_[b] >= 0 && parent_[b] == -1) {
                        if (label_[b] == 1) dual_[b] += delta;
                        else if (label_[b] == 2) dual_[b] -= delta;
                    }
                }
                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allowedge_[deltaedge] = true;
                    int i = ei_[deltaedge], j = ej_[deltaedge];
                    if (label_[inblossom_[i]] == 0) std::swap(i, j);
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allowedge_[deltaedge] = true;
                    queue_.push_back(ei_[deltaedge]);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }
            if (!augmented) break;
            for (int b = nv_; b < 2 * nv_; b++) {
                if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) expand_blossom(b, true);
            }
        }
        std::vector<int> out(nv_, -1);
        for (int v = 0; v < nv_; v++) {
            if (mate_[v] >= 0) out[v] = endpoint_[mate_[v]];
        }
        return out;
    }

   private:
    int64_t slack(int k) const { return dual_[ei_[k]] + dual_[ej_[k]] - 2 * ew_[k]; }

    void leaves(int b, std::vector<int> &out) const {
        if (b < nv_) {
            out.push_back(b);
            return;
        }
        for (int t : childs_[b]) leaves(t, out);
    }
    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        leaves(b, out);
        return out;
    }

    static int wrap(int j, int n) { return ((j % n) + n) % n; }

    void assign_label(int w, int t, int p) {
        int b = inblossom_[w];
        label_[w] = label_[b] = t;
        labelend_[w] = labelend_[b] = p;
        bestedge_[w] = bestedge_[b] = -1;
        if (t == 1) {
            leaves(b, queue_);
        } else if (t == 2) {
            int base = base_[b];
            assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
        }
    }

    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = inblossom_[v];
            if (label_[b] & 4) {
                base = base_[b];
                break;
            }
            path.push_back(b);
            label_[b] = 5;
            if (labelend_[b] == -1) {
                v = -1;
            } else {
                v = endpoint_[labelend_[b]];
                b = inblossom_[v];
                v = endpoint_[labelend_[b]];
            }
            if (w != -1) std::swap(v, w);
        }
        for (int b : path) label_[b] = 1;
        return base;
    }

    void add_blossom(int base, int k) {
        int v = ei_[k], w = ej_[k];
        int bb = inblossom_[base], bv = inblossom_[v], bw = inblossom_[w];
        int b = unused_.back();
        unused_.pop_back();
        base_[b] = base;
        parent_[b] = -1;
        parent_[bb] = b;
        std::vector<int> path, endps;
        while (bv != bb) {
            parent_[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend_[bv]);
            v = endpoint_[labelend_[bv]];
            bv = inblossom_[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            parent_[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend_[bw] ^ 1);
            w = endpoint_[labelend_[bw]];
            bw = inblossom_[w];
        }
        childs_[b] = path;
        endps_[b] = endps;
        label_[b] = 1;
        labelend_[b] = labelend_[bb];
        dual_[b] = 0;
        for (int u : leaves(b)) {
            if (label_[inblossom_[u]] == 2) queue_.push_back(u);
            inblossom_[u] = b;
        }
        std::vector<int> bestedgeto(2 * nv_, -1);
        for (int sub : path) {
            std::vector<std::vector<int>> nblists;
            if (!hasbest_[sub]) {
                for (int u : leaves(sub)) {
                    std::vector<int> l;
                    for (int p : neighbend_[u]) l.push_back(p / 2);
                    nblists.push_back(std::move(l));
                }
            } else {
                nblists.push_back(bestedges_[sub]);
            }
            for (auto &nb : nblists) {
                for (int kk : nb) {
                    int i = ei_[kk], j = ej_[kk];
                    if (inblossom_[j] == b) std::swap(i, j);
                    int bj = inblossom_[j];
                    if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                        bestedgeto[bj] = kk;
                    }
                }
            }
            bestedges_[sub].clear();
            hasbest_[sub] = false;
            bestedge_[sub] = -1;
        }
        bestedges_[b].clear();
        for (int kk : bestedgeto) {
            if (kk != -1) bestedges_[b].push_back(kk);
        }
        hasbest_[b] = true;
        bestedge_[b] = -1;
        for (int kk : bestedges_[b]) {
            if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
        }
    }

    void expand_blossom(int b, bool endstage) {
        for (int s : childs_[b]) {
            parent_[s] = -1;
            if (s < nv_) {
                inblossom_[s] = s;
            } else if (endstage && dual_[s] == 0) {
                expand_blossom(s, endstage);
            } else {
                for (int v : leaves(s)) inblossom_[v] = s;
            }
        }
        if (!endstage && label_[b] == 2) {
            const auto &ch = childs_[b];
            const auto &ep = endps_[b];
            const int n = (int)ch.size();
            int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
            int j = (int)(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
            int jstep, endptrick;
            if (j & 1) {
                j -= n;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int p = labelend_[b];
            while (j != 0) {
                label_[endpoint_[p ^ 1]] = 0;
                label_[endpoint_[ep[wrap(j - endptrick, n)] ^ endptrick ^ 1]] = 0;
                assign_label(endpoint_[p ^ 1], 2, p);
                allowedge_[ep[wrap(j - endptrick, n)] / 2] = true;
                j += jstep;
                p = ep[wrap(j - endptrick, n)] ^ endptrick;
                allowedge_[p / 2] = true;
                j += jstep;
            }
            int bv = ch[wrap(j, n)];
            label_[endpoint_[p ^ 1]] = label_[bv] = 2;
            labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
            bestedge_[bv] = -1;
            j += jstep;
            while (ch[wrap(j, n)] != entrychild) {
                bv = ch[wrap(j, n)];
                if (label_[bv] == 1) {
                    j += jstep;
                    continue;
                }
                int found = -1;
                for (int v : leaves(bv)) {
                    if (label_[v] != 0) {
                        found = v;
                        break;
                    }
                }
                if (found >= 0) {
                    label_[found] = 0;
                    label_[endpoint_[mate_[base_[bv]]]] = 0;
                    assign_label(found, 2, labelend_[found]);
                }
                j += jstep;
            }
        }
        label_[b] = labelend_[b] = -1;
        childs_[b].clear();
        endps_[b].clear();
        base_[b] = -1;
        bestedges_[b].clear();
        hasbest_[b] = false;
        bestedge_[b] = -1;
        unused_.push_back(b);
    }

    void augment_blossom(int b, int v) {
        int t = v;
        while (parent_[t] != b) t = parent_[t];
        if (t >= nv_) augment_blossom(t, v);
        auto &ch = childs_[b];
        auto &ep = endps_[b];
        const int n = (int)ch.size();
        int i = (int)(std::find(ch.begin(), ch.end(), t) - ch.begin());
        int j = i, jstep, endptrick;
        if (i & 1) {
            j -= n;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = ch[wrap(j, n)];
            int p = ep[wrap(j - endptrick, n)] ^ endptrick;
            if (t >= nv_) augment_blossom(t, endpoint_[p]);
            j += jstep;
            t = ch[wrap(j, n)];
            if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
            mate_[endpoint_[p]] = p ^ 1;
            mate_[endpoint_[p ^ 1]] = p;
        }
        std::rotate(ch.begin(), ch.begin() + i, ch.end());
        std::rotate(ep.begin(), ep.begin() + i, ep.end());
        base_[b] = base_[ch[0]];
    }

    void augment_matching(int k) {
        int v = ei_[k], w = ej_[k];
        for (auto [s, p] : {std::pair{v, 2 * k + 1}, std::pair{w, 2 * k}}) {
            while (true) {
                int bs = inblossom_[s];
                if (bs >= nv_) augment_blossom(bs, s);
                mate_[s] = p;
                if (labelend_[bs] == -1) break;
                int t = endpoint_[labelend_[bs]];
                int bt = inblossom_[t];
                s = endpoint_[labelend_[bt]];
                int j = endpoint_[labelend_[bt] ^ 1];
                if (bt >= nv_) augment_blossom(bt, j);
                mate_[j] = labelend_[bt];
                p = labelend_[bt] ^ 1;
            }
        }
    }

    bool maxcard_;
    int nedge_, nv_;
    std::vector<int> ei_, ej_;
    std::vector<int64_t> ew_;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_, label_, labelend_, inblossom_, parent_;
    std::vector<std::vector<int>> childs_, endps_;
    std::vector<int> base_, bestedge_;
    std::vector<std::vector<int>> bestedges_;
    std::vector<bool> hasbest_;
    std::vector<int> unused_;
    std::vector<int64_t> dual_;
    std::vector<bool> allowedge_;
    std::vector<int> queue_;
};

}  // namespace

std::vector<int> max_weight_matching(const std::vector<std::tuple<int, int, int64_t>> &edges, bool max_cardinality) {
    return Matcher(edges, max_cardinality).run();
}

}  // namespace hhqec

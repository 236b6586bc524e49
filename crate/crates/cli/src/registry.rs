//! Static catalog of every check the runner can emit.

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    Params,
    Bfs,
    Local,
    EOracle,
    SModel,
    Norton,
    Heavy,
}

impl Group {
    /// Execution order; later groups may depend on earlier ones.
    pub const ALL: [Group; 7] = [
        Group::Params,
        Group::Bfs,
        Group::Local,
        Group::EOracle,
        Group::SModel,
        Group::Norton,
        Group::Heavy,
    ];
}

pub struct Entry {
    pub name: &'static str,
    pub group: Group,
    pub identity: &'static str,
    pub exploratory: bool,
}

pub static CATALOG: &[Entry] = &[
    Entry { name: "intersection-sum", group: Group::Params, identity: "c_i + a_i + b_i = κ for 0 <= i <= D", exploratory: false },
    Entry { name: "a-closed-form", group: Group::Params, identity: "a_i = [i](q^{N-D} + q^D - q^i - q^{i-1} - 1)", exploratory: false },
    Entry { name: "theta-decreasing", group: Group::Params, identity: "θ_0 > θ_1 > ... > θ_D", exploratory: false },
    Entry { name: "self-dual", group: Group::Params, identity: "θ_i = θ*_i", exploratory: false },
    Entry { name: "theta0-valency", group: Group::Params, identity: "θ_0 = κ", exploratory: false },
    Entry { name: "three-term", group: Group::Params, identity: "θ*_{i-1} c_i + θ*_i a_i + θ*_{i+1} b_i = θ_1 θ*_i", exploratory: false },
    Entry { name: "dim-ev", group: Group::Params, identity: "dim EV = θ*_0 = (q^{N-D} - 1)(q^D - 1)/(q - 1)", exploratory: false },
    Entry { name: "krein-q111", group: Group::Params, identity: "q^1_{11} = a_1 = q^{N-D} + q^D - q - 2", exploratory: false },
    Entry { name: "osize-sum", group: Group::Params, identity: "Σ |O_i| = κ", exploratory: false },
    Entry { name: "osize-positive", group: Group::Params, identity: "|O_i| > 0", exploratory: false },
    Entry { name: "c-row-sums", group: Group::Params, identity: "Σ_j C_ij = a_1", exploratory: false },
    Entry { name: "c-nonnegative-integer", group: Group::Params, identity: "C_ij ∈ Z_{>=0}", exploratory: false },
    Entry { name: "c-reversible", group: Group::Params, identity: "diag(|O|) C is symmetric", exploratory: false },
    Entry { name: "h-eigenvectors", group: Group::Params, identity: "C H = H diag(ϑ)", exploratory: false },
    Entry { name: "h-eta-diagonal", group: Group::Params, identity: "H^t diag(|O|) H = diag(η)", exploratory: false },
    Entry { name: "eta-positive", group: Group::Params, identity: "η_j > 0", exploratory: false },
    Entry { name: "h-invertible", group: Group::Params, identity: "det H ≠ 0", exploratory: false },
    Entry { name: "g-two-forms", group: Group::Params, identity: "|O_i|(δθ*_0 + C_ij θ*_1 + ...) = |O_j|(δθ*_0 + C_ji θ*_1 + ...)", exploratory: false },
    Entry { name: "g-h-diagonal", group: Group::Params, identity: "H^t G H = diag(ε_j η_j)", exploratory: false },
    Entry { name: "g-positive-definite", group: Group::Params, identity: "leading principal minors of G > 0", exploratory: false },
    Entry { name: "lambda-two-way", group: Group::Params, identity: "λ_i = |O_i|(θ*_1 - θ*_{k+ε(i)})/(θ*_0 - θ*_k)", exploratory: false },
    Entry { name: "lambda-sum", group: Group::Params, identity: "Σ λ_i = θ_1", exploratory: false },
    Entry { name: "mu-two-way", group: Group::Params, identity: "μ_j = Σ_i λ_i H_ij", exploratory: false },
    Entry { name: "mu-boundary", group: Group::Params, identity: "μ_1 = θ_1, μ_6 = 0", exploratory: false },
    Entry { name: "gamma-mu", group: Group::Params, identity: "Σ γ_j μ_j = -1", exploratory: false },
    Entry { name: "gamma-mu-vartheta", group: Group::Params, identity: "Σ ϑ_j γ_j μ_j = 0", exploratory: false },
    Entry { name: "gamma6-zero", group: Group::Params, identity: "γ_6 = 0", exploratory: false },
    Entry { name: "vartheta-repeat", group: Group::Params, identity: "ϑ_5 = ϑ_6 = -q", exploratory: false },
    Entry { name: "omega-column", group: Group::Params, identity: "ω_i = H_i6", exploratory: false },
    Entry { name: "eps-offsets", group: Group::Params, identity: "ε(i) = (-1, 0, 0, 0, 0, 1)", exploratory: false },
    Entry { name: "d-nonnegative-integer", group: Group::Params, identity: "D^(ℓ)_ij ∈ Z_{>=0}", exploratory: false },
    Entry { name: "d-beyond-diameter", group: Group::Params, identity: "D^(ℓ) = 0 for ℓ > D", exploratory: false },
    Entry { name: "d-row-totals", group: Group::Params, identity: "Σ_ℓ Σ_j D^(ℓ)_ij = κ", exploratory: false },
    Entry { name: "d-top-entry", group: Group::Params, identity: "D^(k+2) = (q^D - q^{k+1})(q^{N-D} - q^{k+1})/(q - 1) e_6 e_6^t", exploratory: false },
    Entry { name: "d-step-grid", group: Group::Params, identity: "δθ*_0 + C_ij θ*_1 + (|O_j| - C_ij - δ)θ*_2 - Σ_ℓ D^(ℓ)_ij θ*_ℓ = λ_j(θ*_1 - θ*_{k+ε(i)})", exploratory: false },
    Entry { name: "bfs-rank-metric", group: Group::Bfs, identity: "BFS distance from 0 equals rank on every vertex", exploratory: false },
    Entry { name: "bfs-sphere-sizes", group: Group::Bfs, identity: "|Γ_i| = b_0 ... b_{i-1} / (c_1 ... c_i)", exploratory: false },
    Entry { name: "bfs-vertex-total", group: Group::Bfs, identity: "Σ_i |Γ_i| = |X|", exploratory: false },
    Entry { name: "local-class-sizes", group: Group::Local, identity: "both local partitions cover κ vertices with |O_i| = |O′_i| given by the closed forms", exploratory: false },
    Entry { name: "local-c-x", group: Group::Local, identity: "every vertex of class i has C_{ij} neighbors in class j", exploratory: false },
    Entry { name: "local-c-y", group: Group::Local, identity: "every vertex of class i has C_{ij} neighbors in class j", exploratory: false },
    Entry { name: "local-d-k-2", group: Group::Local, identity: "every u ∈ O_i has D^(ℓ)_{ij} vertices of O′_j at distance ℓ = k-2", exploratory: false },
    Entry { name: "local-d-k-1", group: Group::Local, identity: "every u ∈ O_i has D^(ℓ)_{ij} vertices of O′_j at distance ℓ = k-1", exploratory: false },
    Entry { name: "local-d-k", group: Group::Local, identity: "every u ∈ O_i has D^(ℓ)_{ij} vertices of O′_j at distance ℓ = k", exploratory: false },
    Entry { name: "local-d-k+1", group: Group::Local, identity: "every u ∈ O_i has D^(ℓ)_{ij} vertices of O′_j at distance ℓ = k+1", exploratory: false },
    Entry { name: "local-d-k+2", group: Group::Local, identity: "every u ∈ O_i has D^(ℓ)_{ij} vertices of O′_j at distance ℓ = k+2", exploratory: false },
    Entry { name: "local-d-outside", group: Group::Local, identity: "no u ∈ Γ(x), v ∈ Γ(y) have |∂(u,v) - k| > 2", exploratory: false },
    Entry { name: "local-d-constant", group: Group::Local, identity: "cross-distance counts are constant on classes", exploratory: false },
    Entry { name: "local-triangle", group: Group::Local, identity: "∂(a,c) <= ∂(a,b) + ∂(b,c) on sampled triples", exploratory: false },
    Entry { name: "local-lipschitz", group: Group::Local, identity: "|∂(z,y) - ∂(w,y)| <= 1 for adjacent z, w", exploratory: false },
    Entry { name: "local-annihilator", group: Group::Local, identity: "Π over the five local eigenvalues η of (Ã - ηI) = 0", exploratory: false },
    Entry { name: "local-traces", group: Group::Local, identity: "tr Ã = 0, tr Ã² = κ a_1", exploratory: false },
    Entry { name: "local-multiplicities", group: Group::Local, identity: "multiplicities from tr Ã^m (m = 0..4) match the local spectrum table", exploratory: false },
    Entry { name: "e-inner-dual", group: Group::EOracle, identity: "⟨Ex̂,Ex̂⟩ = ⟨Eŷ,Eŷ⟩ = θ*_0/|X|, ⟨Ex̂,Eŷ⟩ = θ*_k/|X|", exploratory: false },
    Entry { name: "e-xy-independent", group: Group::EOracle, identity: "det Gram(Ex̂, Eŷ) = (θ*_0² - θ*_k²)/|X|² > 0", exploratory: false },
    Entry { name: "e-dependence", group: Group::EOracle, identity: "Eŷ + (1-q^{1-k})/(q-1) Ex̂ - q^{1-k} EÔ_1 + q^{1-k} EÔ_2 = 0", exploratory: false },
    Entry { name: "e-osum-x", group: Group::EOracle, identity: "θ_1 Ex̂ = Σ_i EÔ_i", exploratory: false },
    Entry { name: "e-osum-y", group: Group::EOracle, identity: "θ_1 Eŷ = Σ_i EÔ′_i", exploratory: false },
    Entry { name: "strengthened-bsc-1", group: Group::EOracle, identity: "EÔ_1 - EÔ′_1 = λ_1(Ex̂ - Eŷ)", exploratory: false },
    Entry { name: "strengthened-bsc-2", group: Group::EOracle, identity: "EÔ_2 - EÔ′_2 = λ_2(Ex̂ - Eŷ)", exploratory: false },
    Entry { name: "strengthened-bsc-3", group: Group::EOracle, identity: "EÔ_3 - EÔ′_3 = λ_3(Ex̂ - Eŷ)", exploratory: false },
    Entry { name: "strengthened-bsc-4", group: Group::EOracle, identity: "EÔ_4 - EÔ′_4 = λ_4(Ex̂ - Eŷ)", exploratory: false },
    Entry { name: "strengthened-bsc-5", group: Group::EOracle, identity: "EÔ_5 - EÔ′_5 = λ_5(Ex̂ - Eŷ)", exploratory: false },
    Entry { name: "strengthened-bsc-6", group: Group::EOracle, identity: "EÔ_6 - EÔ′_6 = λ_6(Ex̂ - Eŷ)", exploratory: false },
    Entry { name: "e-dim-s", group: Group::EOracle, identity: "Gram(EÔ_1..EÔ_6) has rank 6", exploratory: false },
    Entry { name: "e-gram-closed-form", group: Group::EOracle, identity: "|X| Gram(EÔ_1..EÔ_6) = G", exploratory: false },
    Entry { name: "e-gram-swap", group: Group::EOracle, identity: "Gram(EÔ′_1..EÔ′_6) = Gram(EÔ_1..EÔ_6)", exploratory: false },
    Entry { name: "e-ocheck-sum", group: Group::EOracle, identity: "Σ_i EO∨_i = 0 with O∨_i = Ô_i - λ_i x̂", exploratory: false },
    Entry { name: "e-ocheck-xpy", group: Group::EOracle, identity: "Ex̂ + Eŷ = q^{1-k}(EO∨_1 - EO∨_2)", exploratory: false },
    Entry { name: "e-ocheck-orthogonal", group: Group::EOracle, identity: "⟨EO∨_i, Ex̂ - Eŷ⟩ = 0 for all i", exploratory: false },
    Entry { name: "e-h-x-inner", group: Group::EOracle, identity: "⟨Ex̂, h_1⟩ = θ_1η_1/|X|, ⟨Ex̂, h_j⟩ = 0 for j > 1", exploratory: false },
    Entry { name: "e-h-orthogonal", group: Group::EOracle, identity: "Gram(h_1..h_6) = diag(ε_jη_j)/|X|", exploratory: false },
    Entry { name: "e-hprime-orthogonal", group: Group::EOracle, identity: "Gram(h′_1..h′_6) = diag(ε_jη_j)/|X|", exploratory: false },
    Entry { name: "e-gamma-expansion", group: Group::EOracle, identity: "Eŷ = Σ_j γ_j h_j and Ex̂ = Σ_j γ_j h′_j", exploratory: false },
    Entry { name: "e-h-minus-hprime", group: Group::EOracle, identity: "h_j - h′_j = μ_j(Ex̂ - Eŷ) for all j", exploratory: false },
    Entry { name: "e-hcheck-one-zero", group: Group::EOracle, identity: "h∨_1 = h_1 - μ_1 Ex̂ = 0", exploratory: false },
    Entry { name: "e-hcheck-xpy", group: Group::EOracle, identity: "Ex̂ + Eŷ = Σ_{j=2..5} γ_j h∨_j", exploratory: false },
    Entry { name: "e-omega-swap", group: Group::EOracle, identity: "h_6 = h′_6", exploratory: false },
    Entry { name: "local-basis-scalars", group: Group::EOracle, identity: "θ_1θ*_1 ≠ 0 and (θ*_1 - θ*_2)(η + q + 1) ≠ 0 for each nontrivial local eigenvalue η", exploratory: false },
    Entry { name: "local-basis-polynomial", group: Group::EOracle, identity: "f(Ã) = J for the quartic f vanishing on the nontrivial local eigenvalues with f(a_1) = κ", exploratory: false },
    Entry { name: "local-basis-sample", group: Group::EOracle, identity: "Gram of E-images of six random neighbors of x is nonsingular", exploratory: false },
    Entry { name: "s-model-build", group: Group::SModel, identity: "the swap matrix T is invertible", exploratory: false },
    Entry { name: "s-g-positive", group: Group::SModel, identity: "all leading principal minors of G are positive", exploratory: false },
    Entry { name: "s-swap-involution", group: Group::SModel, identity: "T² = I", exploratory: false },
    Entry { name: "s-swap-isometry", group: Group::SModel, identity: "Tᵗ G T = G", exploratory: false },
    Entry { name: "s-swap-x", group: Group::SModel, identity: "σ x̂ = ŷ", exploratory: false },
    Entry { name: "s-inner-dual", group: Group::SModel, identity: "⟨x̂,x̂⟩ = θ*_0/|X| and ⟨x̂,ŷ⟩ = θ*_k/|X| in coordinates", exploratory: false },
    Entry { name: "s-h-basis", group: Group::SModel, identity: "h_1..h_6 span S", exploratory: false },
    Entry { name: "s-h1-x", group: Group::SModel, identity: "h_1 = θ_1 x̂", exploratory: false },
    Entry { name: "s-h-orthogonal", group: Group::SModel, identity: "⟨h_j, h_l⟩ = δ_{jl} ε_jη_j/|X|", exploratory: false },
    Entry { name: "s-hprime-orthogonal", group: Group::SModel, identity: "⟨h′_j, h′_l⟩ = δ_{jl} ε_jη_j/|X|", exploratory: false },
    Entry { name: "s-gamma-expansion", group: Group::SModel, identity: "ŷ = Σ_j γ_j h_j", exploratory: false },
    Entry { name: "s-h-minus-hprime", group: Group::SModel, identity: "h_j - h′_j = μ_j(x̂ - ŷ) for all j", exploratory: false },
    Entry { name: "s-hcheck-one-zero", group: Group::SModel, identity: "h∨_1 = 0", exploratory: false },
    Entry { name: "s-hcheck-sym-basis", group: Group::SModel, identity: "h∨_2..h∨_6 are σ-fixed, orthogonal to x̂ - ŷ, and of rank 5", exploratory: false },
    Entry { name: "s-hcheck-ocheck", group: Group::SModel, identity: "h∨_j = Σ_i H_{ij} O∨_i", exploratory: false },
    Entry { name: "s-hcheck-xpy", group: Group::SModel, identity: "x̂ + ŷ = Σ_{j=2..5} γ_j h∨_j", exploratory: false },
    Entry { name: "s-ocheck-orthogonal", group: Group::SModel, identity: "⟨O∨_i, x̂ - ŷ⟩ = 0", exploratory: false },
    Entry { name: "s-sym-asym-dims", group: Group::SModel, identity: "dim Sym(S) = 5, dim ASym(S) = 1 = dim span(x̂ - ŷ)", exploratory: false },
    Entry { name: "s-decompose", group: Group::SModel, identity: "x̂ - ŷ is antisymmetric, x̂ + ŷ symmetric, and Ô_i splits with antisymmetric part (λ_i/2)(x̂ - ŷ)", exploratory: false },
    Entry { name: "s-cross-validation", group: Group::SModel, identity: "uᵗ(G/|X|)v = ⟨E lift(u), E lift(v)⟩ on random coordinate pairs", exploratory: false },
    Entry { name: "n-operators", group: Group::Norton, identity: "Lx ŷ = Ly x̂ for the assembled operators", exploratory: false },
    Entry { name: "n-x-star-x", group: Group::Norton, identity: "Ex̂ ⋆ Ex̂ = q¹₁₁ Ex̂/|X|", exploratory: false },
    Entry { name: "n-y-star-y", group: Group::Norton, identity: "Eŷ ⋆ Eŷ = q¹₁₁ Eŷ/|X|", exploratory: false },
    Entry { name: "n-commute", group: Group::Norton, identity: "Ex̂ ⋆ Eŷ = Eŷ ⋆ Ex̂", exploratory: false },
    Entry { name: "n-x-star-y", group: Group::Norton, identity: "|X|(θ_1-θ_2) Ex̂⋆Eŷ = (θ*_{k-1}-θ*_k)EÔ_1 + (θ*_{k+1}-θ*_k)EÔ_6 + (θ_1-θ_2)θ*_k Ex̂ + (θ_2-θ_0)Eŷ", exploratory: false },
    Entry { name: "n-x-star-y-check", group: Group::Norton, identity: "|X|(θ_1-θ_2) Ex̂⋆Eŷ = (θ*_{k-1}-θ*_k)EO∨_1 + (θ*_{k+1}-θ*_k)EO∨_6 + (θ_2-θ_0)(Ex̂+Eŷ)", exploratory: false },
    Entry { name: "n-xy-sym", group: Group::Norton, identity: "Ex̂ ⋆ Eŷ ∈ Sym(S)", exploratory: false },
    Entry { name: "n-xyh", group: Group::Norton, identity: "Ex̂ ⋆ Eŷ = |X|⁻¹ Σ_{j=1..5} γ_jϑ_j h_j", exploratory: false },
    Entry { name: "n-xyhv", group: Group::Norton, identity: "Ex̂ ⋆ Eŷ = |X|⁻¹ Σ_{j=2..5} γ_jϑ_j h∨_j", exploratory: false },
    Entry { name: "n-h-eigen", group: Group::Norton, identity: "Ex̂ ⋆ h_j = ϑ_j h_j/|X| for all j", exploratory: false },
    Entry { name: "n-hprime-eigen", group: Group::Norton, identity: "Eŷ ⋆ h′_j = ϑ_j h′_j/|X| for all j", exploratory: false },
    Entry { name: "n-x-ocheck", group: Group::Norton, identity: "Ex̂ ⋆ EO∨_j = |X|⁻¹ Σ_i C_{ij} EO∨_i + s_j Ex̂/|X|, and likewise with ŷ", exploratory: false },
    Entry { name: "n-sym-star-asym", group: Group::Norton, identity: "EO∨_j ⋆ (Ex̂ - Eŷ) = s_j(Ex̂ - Eŷ)/|X| with the six factored s_j", exploratory: false },
    Entry { name: "n-sym-asym-in-asym", group: Group::Norton, identity: "Sym(S) ⋆ ASym(S) ⊆ ASym(S)", exploratory: false },
    Entry { name: "n-asym-asym-in-sym", group: Group::Norton, identity: "ASym(S) ⋆ ASym(S) ⊆ Sym(S)", exploratory: false },
    Entry { name: "n-xpy-sym", group: Group::Norton, identity: "(Ex̂ + Eŷ) ⋆ EO∨_j = 2|X|⁻¹ Σ_i C_{ij} EO∨_i + s_j(Ex̂ + Eŷ)/|X| ∈ Sym(S)", exploratory: false },
    Entry { name: "n-xy-act-hcheck", group: Group::Norton, identity: "Ex̂ ⋆ h∨_j = |X|⁻¹ϑ_j h∨_j + |X|⁻¹(ϑ_j - ϑ_1)μ_j Ex̂, and likewise with ŷ", exploratory: false },
    Entry { name: "n-hcheck-diff", group: Group::Norton, identity: "h∨_j ⋆ (Ex̂ - Eŷ) = |X|⁻¹(ϑ_j - ϑ_1)μ_j(Ex̂ - Eŷ)", exploratory: false },
    Entry { name: "n-xpy-act-hcheck", group: Group::Norton, identity: "(Ex̂ + Eŷ) ⋆ h∨_j = 2|X|⁻¹ϑ_j h∨_j + |X|⁻¹(ϑ_j - ϑ_1)μ_j(Ex̂ + Eŷ)", exploratory: false },
    Entry { name: "prop-omega-eigen", group: Group::Norton, identity: "Ex̂ ⋆ ω = Eŷ ⋆ ω = -q ω/|X|", exploratory: false },
    Entry { name: "omega-swap", group: Group::Norton, identity: "σ ω = ω", exploratory: false },
    Entry { name: "omega-perp-xy", group: Group::Norton, identity: "⟨Ex̂, ω⟩ = ⟨Eŷ, ω⟩ = 0", exploratory: false },
    Entry { name: "omega-ocheck", group: Group::Norton, identity: "ω = Σ_i ω_i EO∨_i", exploratory: false },
    Entry { name: "omega-perp-invariant", group: Group::Norton, identity: "Ex̂ ⋆ ω⊥ ⊆ ω⊥ and Eŷ ⋆ ω⊥ ⊆ ω⊥", exploratory: false },
    Entry { name: "omega-perp-bases", group: Group::Norton, identity: "h_1..h_5 and h′_1..h′_5 are orthogonal bases of ω⊥", exploratory: false },
    Entry { name: "omega-perp-sym-basis", group: Group::Norton, identity: "h∨_2..h∨_5 form a basis of ω⊥ ∩ Sym(S), which has dimension 4", exploratory: false },
    Entry { name: "omega-decompositions", group: Group::Norton, identity: "S = span ω ⊕ ASym(S) ⊕ (ω⊥ ∩ Sym(S)), Sym(S) = span ω ⊕ (ω⊥ ∩ Sym(S)), ω⊥ = ASym(S) ⊕ (ω⊥ ∩ Sym(S))", exploratory: false },
    Entry { name: "gen-x-family", group: Group::Norton, identity: "ŷ, Ex̂⋆ŷ, ..., (Ex̂⋆)⁴ŷ form a basis of ω⊥", exploratory: false },
    Entry { name: "gen-y-family", group: Group::Norton, identity: "x̂, Eŷ⋆x̂, ..., (Eŷ⋆)⁴x̂ form a basis of ω⊥", exploratory: false },
    Entry { name: "gen-b-family", group: Group::Norton, identity: "B, B⋆B, B⋆(B⋆B), B⋆(B⋆(B⋆B)) with B = Ex̂ + Eŷ form a basis of ω⊥ ∩ Sym(S)", exploratory: false },
    Entry { name: "thm-bbalanced", group: Group::Norton, identity: "v(w) - v(w̄) ∈ span(Ex̂ - Eŷ) for every word w over {x, y} of length 1..n", exploratory: false },
    Entry { name: "word-swap-equivariance", group: Group::Norton, identity: "v(w̄) = σ v(w) for every word", exploratory: false },
    Entry { name: "word-chart-independence", group: Group::Norton, identity: "word vectors computed in the Ô′ chart map back to the same vectors", exploratory: false },
    Entry { name: "heavy-x-cube", group: Group::Heavy, identity: "⟨Ex̂ ⋆ Ex̂, Ex̂⟩ = q¹₁₁ θ*_0/|X|²", exploratory: false },
    Entry { name: "heavy-calibration", group: Group::Heavy, identity: "⟨Ex̂ ⋆ Eŷ, t⟩ by enumeration equals ⟨Lx ŷ, t⟩ under G for five test vectors", exploratory: false },
    Entry { name: "heavy-xy-sym", group: Group::Heavy, identity: "⟨Ex̂ ⋆ Eŷ, Ex̂ - Eŷ⟩ = 0 by enumeration", exploratory: false },
    Entry { name: "heavy-nadj", group: Group::Heavy, identity: "⟨Ex̂ ⋆ EÔ_j, EÔ_i⟩ = Σ_l C_{lj} G_{li}/|X|²", exploratory: false },
    Entry { name: "heavy-cross-validation", group: Group::Heavy, identity: "⟨Lx s, t⟩ under G equals the enumerated triple on ten random pairs", exploratory: false },
    Entry { name: "heavy-direct", group: Group::Heavy, identity: "the atom tensor agrees with direct enumeration on ⟨Ex̂ ⋆ Eŷ, Ex̂⟩", exploratory: false },
    Entry { name: "heavy-permutation-symmetry", group: Group::Heavy, identity: "⟨u ⋆ v, w⟩ is invariant under all six argument permutations", exploratory: false },
    Entry { name: "conj-sym-star-sym", group: Group::Heavy, identity: "⟨EO∨_i ⋆ EO∨_j, Ex̂ - Eŷ⟩ = 0 for all i <= j (necessary for Sym(S) ⋆ Sym(S) ⊆ Sym(S))", exploratory: true },
];

pub fn lookup(name: &str) -> Option<&'static Entry> {
    CATALOG.iter().find(|e| e.name == name)
}

pub fn group_of(name: &str) -> Option<Group> {
    lookup(name).map(|e| e.group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn names_are_unique_and_groups_ordered() {
        let names: BTreeSet<_> = CATALOG.iter().map(|e| e.name).collect();
        assert_eq!(names.len(), CATALOG.len());
        assert!(CATALOG.windows(2).all(|w| w[0].group <= w[1].group));
        assert!(CATALOG.iter().all(|e| !e.identity.is_empty()));
    }

    #[test]
    fn only_the_probe_is_exploratory() {
        let probes: Vec<_> = CATALOG
            .iter()
            .filter(|e| e.exploratory)
            .map(|e| e.name)
            .collect();
        assert_eq!(probes, ["conj-sym-star-sym"]);
        assert_eq!(group_of("conj-sym-star-sym"), Some(Group::Heavy));
        assert_eq!(group_of("prop-omega-eigen"), Some(Group::Norton));
        assert_eq!(group_of("local-basis-sample"), Some(Group::EOracle));
        assert_eq!(group_of("nope"), None);
    }
}

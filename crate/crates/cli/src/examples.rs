/// Bundled documents as `(name, description, text)`.
pub const EXAMPLES: &[(&str, &str, &str)] = &[
    ("node", "rank-one factorizations of xy with the quadratic form", include_str!("../data/node.mf")),
    ("node_pair", "the rank-two factorization (x, y) + (y, x) of xy with a constant form", include_str!("../data/node_pair.mf")),
    ("a2", "the pair (z, z^2) and its shift over z^3", include_str!("../data/a2.mf")),
    ("cusp", "(x, x^2) and (x^2, x) over x^3 with a quadratic form", include_str!("../data/cusp.mf")),
    ("brieskorn2", "tensor of two blocks over x1^3 + x2^3 with a twisted form", include_str!("../data/brieskorn2.mf")),
];

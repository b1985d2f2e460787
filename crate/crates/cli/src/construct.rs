//! The `construct` command.

use std::fmt::Write as _;

use cimlab_core::structured::{self, construct_with_quotient_bounded, DEFAULT_PRIME_CEILING};

use crate::error::CliError;
use crate::groupfile::GroupFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    G1,
    G2,
    G3,
    Solouno,
    Qab,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructArgs {
    pub abelian: Option<Vec<u32>>,
    pub d1: usize,
    pub d2: usize,
    pub prime_ceiling: u64,
}

impl Default for ConstructArgs {
    fn default() -> Self {
        ConstructArgs { abelian: None, d1: 2, d2: 2, prime_ceiling: DEFAULT_PRIME_CEILING }
    }
}

/// The group file text for `target`, headed by `#` comment lines.
pub fn construct(target: Target, args: &ConstructArgs) -> Result<String, CliError> {
    let mut header = String::new();
    let g = match target {
        Target::G1 => {
            header.push_str("# G1 = (V5^2 x V17^2) : C8\n");
            structured::example_g1()
        }
        Target::G2 => {
            header.push_str("# G2 = (V5^2 x V17) : C8\n");
            structured::example_g2()
        }
        Target::G3 => {
            header.push_str("# G3 = (V5 x V17^2) : C8\n");
            structured::example_g3()
        }
        Target::Solouno => {
            let _ = writeln!(header, "# (V5^{} x V13^{}) : C4", args.d1, args.d2);
            structured::construct_solouno(args.d1, args.d2)?
        }
        Target::Qab => {
            let orders =
                args.abelian.as_ref().ok_or_else(|| CliError::Invalid("qab needs --abelian d1,d2,...".into()))?;
            let q = construct_with_quotient_bounded(orders, args.prime_ceiling)?;
            let _ = writeln!(header, "# quotient by the module part: {orders:?}");
            for (gens, m, p) in &q.kernels {
                let gens: Vec<String> = gens
                    .iter()
                    .map(|t| format!("({})", t.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
                    .collect();
                let _ = writeln!(header, "# kernel <{}> with cyclic quotient of order {m}, prime {p}", gens.join(", "));
            }
            q.group
        }
    };
    Ok(header + &GroupFile::Structured(g).emit())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emitted_files_parse_back() {
        for t in [Target::G1, Target::G2, Target::G3, Target::Solouno] {
            let text = construct(t, &ConstructArgs::default()).unwrap();
            let f = GroupFile::parse(&text).unwrap();
            assert!(f.structured().unwrap().validate().is_ok());
        }
        let text = construct(Target::Solouno, &ConstructArgs::default()).unwrap();
        assert!(text.contains("H 4\nmodule p=5 delta=2 action=2\nmodule p=13 delta=2 action=5\n"), "{text}");
    }

    #[test]
    fn qab_lists_primes_and_needs_orders() {
        assert!(construct(Target::Qab, &ConstructArgs::default()).is_err());
        let args = ConstructArgs { abelian: Some(vec![4]), ..ConstructArgs::default() };
        let text = construct(Target::Qab, &args).unwrap();
        assert!(text.contains("# kernel"));
        let g = GroupFile::parse(&text).unwrap();
        assert!(g.structured().unwrap().fast_is_cim().unwrap().is_cim);
    }

    #[test]
    fn prime_search_ceiling_is_an_error() {
        let args = ConstructArgs { abelian: Some(vec![4]), prime_ceiling: 4, ..ConstructArgs::default() };
        assert!(construct(Target::Qab, &args).is_err());
        let args = ConstructArgs { d1: 1, ..ConstructArgs::default() };
        assert!(construct(Target::Solouno, &args).is_err());
    }
}

//! The three shipped languages. Each also exists as a JSON document under
//! `data/`, kept in sync by a test.

use crate::signature::{stlc_finitized, Argument, OpDecl, Signature, Sort};

pub const STLC_JSON: &str = include_str!("../data/stlc.json");
pub const PCF_JSON: &str = include_str!("../data/pcf.json");
pub const COC_JSON: &str = include_str!("../data/coc.json");

/// Simply-typed lambda calculus over one base sort `b` with arrows of
/// depth one.
pub fn stlc_example() -> Signature {
    stlc_finitized(&[Sort::new("b")], 1)
}

/// PCF: the simply-typed core over `nat` and `bool` plus Plotkin's
/// constants, with `cond` and a binding `fix` at every sort.
pub fn pcf_example() -> Signature {
    let (nat, bool) = (Sort::new("nat"), Sort::new("bool"));
    let core = stlc_finitized(&[nat.clone(), bool.clone()], 1);
    let plain = |s: &Sort| Argument::plain(s.clone());
    let mut ops = vec![
        OpDecl::new("zero", vec![], nat.clone()),
        OpDecl::new("succ", vec![plain(&nat)], nat.clone()),
        OpDecl::new("pred", vec![plain(&nat)], nat.clone()),
        OpDecl::new("true", vec![], bool.clone()),
        OpDecl::new("false", vec![], bool.clone()),
        OpDecl::new("iszero", vec![plain(&nat)], bool.clone()),
    ];
    for s in &core.sorts {
        ops.push(OpDecl::new(format!("cond_{s}"), vec![plain(&bool), plain(s), plain(s)], s.clone()));
    }
    for s in &core.sorts {
        // fix x. body, with x : s bound in a body of sort s
        ops.push(OpDecl::new(format!("fix_{s}"), vec![Argument::new(vec![s.clone()], s.clone())], s.clone()));
    }
    let constants = Signature::new(core.sorts.clone(), ops);
    core.sum(&constants).expect("both parts share the sort list")
}

/// Pre-syntax of the calculus of constructions with a sort of types and a
/// sort of terms.
pub fn coc_example() -> Signature {
    let (ty, el) = (Sort::new("ty"), Sort::new("el"));
    let bind_el = |s: &Sort| Argument::new(vec![el.clone()], s.clone());
    Signature::new(
        vec![ty.clone(), el.clone()],
        vec![
            OpDecl::new("Pi", vec![Argument::plain(ty.clone()), bind_el(&ty)], ty.clone()),
            OpDecl::new("lam", vec![Argument::plain(ty.clone()), bind_el(&el)], el.clone()),
            OpDecl::new("app", vec![Argument::plain(el.clone()), Argument::plain(el.clone())], el.clone()),
            OpDecl::new("Prop", vec![], ty.clone()),
            OpDecl::new("Proof", vec![Argument::plain(el.clone())], ty.clone()),
        ],
    )
}

/// Every shipped example with its name and committed JSON text.
pub fn all() -> Vec<(&'static str, Signature, &'static str)> {
    vec![("stlc", stlc_example(), STLC_JSON), ("pcf", pcf_example(), PCF_JSON), ("coc", coc_example(), COC_JSON)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::parse_signature;

    #[test]
    fn committed_json_matches() {
        let bless = std::env::var_os("SORTAL_BLESS").is_some();
        for (name, sig, text) in all() {
            if bless {
                let path = format!("{}/data/{name}.json", env!("CARGO_MANIFEST_DIR"));
                std::fs::write(path, sig.to_json() + "\n").unwrap();
                continue;
            }
            assert_eq!(parse_signature(text).unwrap(), sig, "{name}.json is stale; rerun with SORTAL_BLESS=1");
        }
    }

    #[test]
    fn shapes() {
        let stlc = stlc_example();
        assert_eq!((stlc.sorts.len(), stlc.ops.len()), (2, 2));
        let app = stlc.op(stlc.op_id("app_b_b").unwrap());
        assert_eq!(app.args, vec![Argument::plain(Sort::new("b->b")), Argument::plain(Sort::new("b"))]);
        assert_eq!(app.result, Sort::new("b"));

        let pcf = pcf_example();
        assert_eq!(pcf.sorts.len(), 6);
        let zero = pcf.op(pcf.op_id("zero").unwrap());
        assert!(zero.args.is_empty());
        assert_eq!(zero.result, Sort::new("nat"));
        let cond = pcf.op(pcf.op_id("cond_nat").unwrap());
        let plain = |n: &str| Argument::plain(Sort::new(n));
        assert_eq!(cond.args, vec![plain("bool"), plain("nat"), plain("nat")]);
        let fix = pcf.op(pcf.op_id("fix_bool").unwrap());
        assert_eq!(fix.args, vec![Argument::new(vec![Sort::new("bool")], Sort::new("bool"))]);

        let coc = coc_example();
        assert_eq!(coc.sorts, vec![Sort::new("ty"), Sort::new("el")]);
        let pi = coc.op(coc.op_id("Pi").unwrap());
        assert_eq!(pi.args[1], Argument::new(vec![Sort::new("el")], Sort::new("ty")));

        for (name, sig, _) in all() {
            assert_eq!(sig.validate(), vec![], "{name}");
        }
    }
}

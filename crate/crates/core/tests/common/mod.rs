#![allow(dead_code)]

use std::path::PathBuf;

use wakimoto_core::cli::{Pipeline, RunConfig};
use wakimoto_core::currents::Realization;
use wakimoto_core::exactnum::{parse_q, Q};

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.toml"))
}

pub fn pipeline(name: &str) -> Pipeline {
    Pipeline::new(RunConfig::load(&config_path(name)).unwrap()).unwrap()
}

pub fn pipeline_from(text: &str) -> Pipeline {
    Pipeline::new(RunConfig::from_toml(text, "inline").unwrap()).unwrap()
}

pub fn level(s: &str) -> Q {
    parse_q(s).unwrap()
}

pub fn realization(name: &str, k: &str) -> Realization {
    pipeline(name).realization(&level(k)).unwrap()
}

/// `sl_2`, principal grading, inner twist of order `n` (trivial for `n = 1`).
pub fn sl2_text(n: u32) -> String {
    let aut = if n > 1 {
        format!("automorphism = {{ kind = \"inner\", theta = \"principal\", order = {n} }}\n")
    } else {
        String::new()
    };
    format!("name = \"sl2\"\nlevel = 1\nalgebra = {{ preset = \"sl\", n = 2 }}\n{aut}grading = {{ h = \"principal\" }}\n")
}

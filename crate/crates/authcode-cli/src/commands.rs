//! Command implementations. Each returns the process exit status:
//! 0 for success/accept, 1 for a semantic failure such as a rejected
//! verification; input and cap problems surface as [`CliError`].

use std::path::PathBuf;

use authcode::adversary::{CoalitionView, ForgeOutcome};
use authcode::analysis;
use authcode::code::LinearCode;
use authcode::scheme::{KeyMatrix, SchemeParams};

use crate::io;
use crate::CliError;

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn code_info(content: &str, cap: u64) -> Result<u8, CliError> {
    let code = io::parse_code(content)?;
    let d = code.min_distance(cap)?;
    let d_dual = match code.dual() {
        Ok(dual) => dual.min_distance(cap)?.to_string(),
        Err(authcode::code::CodeError::TrivialDual) => "undefined".to_string(),
        Err(e) => return Err(e.into()),
    };
    println!(
        "q={} V={} k={} d={} d_dual={}",
        code.spec().modulus(),
        code.length(),
        code.dimension(),
        d,
        d_dual
    );
    Ok(0)
}

pub fn code_dual(content: &str) -> Result<u8, CliError> {
    let code = io::parse_code(content)?;
    let dual = code.dual()?;
    print!("{}", io::render_code(&dual));
    Ok(0)
}

pub fn code_minimal(content: &str, coord: usize, cap: u64) -> Result<u8, CliError> {
    let code = io::parse_code(content)?;
    let dual = code.dual()?;
    let minimal = dual.minimal_codewords_wrt(coord, cap)?;
    for word in &minimal {
        println!(
            "{}",
            word.vector()
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    Ok(0)
}

fn load_params(code_content: &str, messages: usize, cap: u64) -> Result<SchemeParams, CliError> {
    let code = io::parse_code(code_content)?;
    Ok(SchemeParams::new(code, messages, cap)?)
}

pub fn scheme_keygen(
    code_content: &str,
    messages: usize,
    seed: u64,
    out: Option<PathBuf>,
    cap: u64,
) -> Result<u8, CliError> {
    let params = load_params(code_content, messages, cap)?;
    let key = params.keygen(seed);
    let rendered = io::render_key_matrix(params.spec().modulus(), messages, key.matrix());
    write_or_print(out, &rendered)
}

fn write_or_print(out: Option<PathBuf>, content: &str) -> Result<u8, CliError> {
    match out {
        Some(path) => {
            std::fs::write(&path, content)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            println!("wrote {}", path.display());
            Ok(0)
        }
        None => {
            print!("{content}");
            Ok(0)
        }
    }
}

pub fn scheme_distribute(
    code_content: &str,
    keys_content: &str,
    out_b: Option<PathBuf>,
    out_keys: Option<PathBuf>,
    cap: u64,
) -> Result<u8, CliError> {
    let (spec, messages, matrix) = io::parse_key_matrix(keys_content)?;
    let params = load_params(code_content, messages, cap)?;
    if spec != params.spec() {
        return Err(CliError::Input(format!(
            "key file is over F_{}, code is over F_{}",
            spec.modulus(),
            params.spec().modulus()
        )));
    }
    let key = params.key_matrix(matrix)?;
    let (b, keys) = params.distribute(&key)?;
    let rendered = io::render_distributed(
        params.spec().modulus(),
        messages,
        params.code().dimension(),
        &b,
    );
    if let Some(dir) = &out_keys {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
        for key in &keys {
            let path = dir.join(format!("receiver_{}.key", key.receiver()));
            std::fs::write(&path, io::render_receiver_key(key))
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        }
        println!("wrote {} receiver key files to {}", keys.len(), dir.display());
    }
    write_or_print(out_b, &rendered)
}

pub fn scheme_tag(keys_content: &str, message: u64) -> Result<u8, CliError> {
    let (spec, _, matrix) = io::parse_key_matrix(keys_content)?;
    if message >= u64::from(spec.modulus()) {
        return Err(CliError::Input(format!(
            "message {message} is out of range 0..{}",
            spec.modulus()
        )));
    }
    let key = KeyMatrix::from_matrix(matrix);
    let tagged = key.tag(spec.element(message));
    println!("{}", io::render_tagged(&tagged));
    Ok(0)
}

pub fn scheme_verify(
    code_content: &str,
    keys_content: Option<&str>,
    receiver_key_content: Option<&str>,
    tagged: &str,
) -> Result<u8, CliError> {
    let code = io::parse_code(code_content)?;
    let spec = code.spec();
    let message = io::parse_tagged(tagged, spec, code.dimension())?;

    let keys = match (keys_content, receiver_key_content) {
        (Some(content), None) => {
            let (kspec, _, k, b) = io::parse_distributed(content)?;
            if kspec != spec {
                return Err(CliError::Input(format!(
                    "key file is over F_{}, code is over F_{}",
                    kspec.modulus(),
                    spec.modulus()
                )));
            }
            if k != code.dimension() || b.cols() != code.length() {
                return Err(CliError::Input(format!(
                    "key file is for a [{}, {k}] code, this code is [{}, {}]",
                    b.cols(),
                    code.length(),
                    code.dimension()
                )));
            }
            (1..=code.length())
                .map(|i| authcode::scheme::PrivateKey::new(i, b.column(i - 1)))
                .collect::<Vec<_>>()
        }
        (None, Some(content)) => {
            let key = io::parse_receiver_key(content, spec)?;
            if key.receiver() > code.length() {
                return Err(CliError::Input(format!(
                    "receiver {} exceeds code length {}",
                    key.receiver(),
                    code.length()
                )));
            }
            vec![key]
        }
        _ => {
            return Err(CliError::Input(
                "exactly one of --keys or --receiver-key is required".into(),
            ))
        }
    };

    let mut all_accept = true;
    for key in &keys {
        let g = code.column(key.receiver())?;
        let accept = key.verify(&g, &message);
        all_accept &= accept;
        println!(
            "receiver {}: {}",
            key.receiver(),
            if accept { "accept" } else { "reject" }
        );
    }
    Ok(if all_accept { 0 } else { 1 })
}

pub fn attack(code_content: &str, scenario: &io::Scenario, cap: u64) -> Result<u8, CliError> {
    let params = load_params(code_content, scenario.messages, cap)?;
    let spec = params.spec();
    let check_residue = |v: u64, what: &str| -> Result<(), CliError> {
        if v >= u64::from(spec.modulus()) {
            return Err(CliError::Input(format!(
                "{what} {v} is out of range 0..{}",
                spec.modulus()
            )));
        }
        Ok(())
    };
    for &s in &scenario.observed {
        check_residue(s, "observed message")?;
    }
    check_residue(scenario.fresh, "fresh message")?;

    let key = params.keygen(scenario.seed);
    let observed: Vec<_> = scenario.observed.iter().map(|&s| spec.element(s)).collect();
    let view = CoalitionView::observe(&params, &key, scenario.coalition.clone(), &observed)?;

    println!(
        "coalition: {}",
        view.coalition()
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    println!(
        "observed: {}",
        view.observed()
            .iter()
            .map(|m| m.message.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    println!("target: {}  fresh: {}", scenario.target, scenario.fresh);
    if view.observed().len() < params.max_messages() {
        println!(
            "note: only {} of {} messages observed; the key space below is larger than at full knowledge",
            view.observed().len(),
            params.max_messages()
        );
    }

    let space = view.solve_key_space(cap)?;
    println!("keyspace={} (dimension {})", space.solution_count(), space.dimension());

    let fresh = spec.element(scenario.fresh);
    let dist = view.label_distribution(scenario.target, fresh, cap)?;
    let counts = dist
        .counts()
        .iter()
        .enumerate()
        .map(|(v, c)| format!("{v}:{c}"))
        .collect::<Vec<_>>()
        .join(" ");
    println!("labels: {counts}");
    println!(
        "distribution: {}",
        match dist.point_mass() {
            Some(label) => format!("point-mass label={label}"),
            None if dist.is_uniform() => "uniform".to_string(),
            None => "mixed".to_string(),
        }
    );

    let class = analysis::classify_group(params.code(), view.coalition(), scenario.target)?;
    println!(
        "verdict: {}",
        match class.verdict {
            analysis::Verdict::Substitution => "substitution",
            analysis::Verdict::Adversary => "adversary",
        }
    );

    match view.forge(scenario.target, fresh, cap)? {
        ForgeOutcome::Forged { message, label } => {
            println!("label: {label}");
            println!("forged: {}", io::render_tagged(&message));
            let (_, keys) = params.distribute(&key)?;
            let g = params.code().column(scenario.target)?;
            let accepted = keys[scenario.target - 1].verify(&g, &message);
            println!("target accepts: {}", if accepted { "yes" } else { "no" });
        }
        ForgeOutcome::Ambiguous { candidates } => {
            println!(
                "candidate labels: {}",
                candidates
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            let best: u128 = *dist.counts().iter().max().unwrap_or(&0);
            let total = dist.total();
            let g = gcd(best, total);
            println!("success probability: {}/{}", best / g, total / g);
        }
    }
    Ok(0)
}

pub fn report(
    code_content: &str,
    cap: u64,
    kv: bool,
    sample: Option<u64>,
    seed: u64,
) -> Result<u8, CliError> {
    let code = io::parse_code(code_content)?;
    if let Some(samples) = sample {
        return sampled_report(&code, samples, seed);
    }
    let report = analysis::security_report(&code, cap)?;
    if kv {
        print!("{}", report.render_kv());
    } else {
        print!("{}", report.render_text());
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn sampled_report(code: &LinearCode, samples: u64, seed: u64) -> Result<u8, CliError> {
    println!(
        "sampled profile ({} subsets per size, seed {}): substitution fraction by coalition size",
        samples, seed
    );
    for target in 1..=code.length() {
        let profile = analysis::sample_size_profile(code, target, samples, seed)?;
        let cells = profile
            .iter()
            .map(|(size, hits, total)| format!("{size}:{hits}/{total}"))
            .collect::<Vec<_>>()
            .join(" ");
        println!("receiver {target}: {cells}");
    }
    println!("note: sampled estimates only; rerun without --sample for exact thresholds");
    Ok(0)
}

use qtheta_cli::{parse_order, run};
use qtheta_core::Rat;
use serde_json::Value;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("qtheta").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn expand_theta_json() {
    let (code, out, _) = cli(&["expand", "theta[0,0](2t)", "--order", "5", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let terms: Vec<(i64, i64, String)> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            (
                t["exp_num"].as_i64().unwrap(),
                t["exp_den"].as_i64().unwrap(),
                t["coefficient"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    assert_eq!(
        terms,
        [(0, 1, "1".to_string()), (1, 1, "2".to_string()), (4, 1, "2".to_string())]
    );
}

#[test]
fn expand_fractional_order_and_csv() {
    let (code, out, _) = cli(&["expand", "eta(1t)", "--order", "2.5", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, ["exp_num,exp_den,coefficient", "1,24,1", "25,24,-1", "49,24,-1"]);
}

#[test]
fn expand_rejects_bad_input() {
    let (code, _, err) = cli(&["expand", "theta[1,1](1t", "--order", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("offset 14"), "{err}");
    assert_eq!(cli(&["expand", "eta(1t)", "--order", "0"]).0, 2);
    assert_eq!(cli(&["expand", "eta(1t)", "--order", "3", "--ring", "7"]).0, 2);
    assert_eq!(cli(&["expand", "1/theta[1,1](1t)", "--order", "3"]).0, 2);
    assert_eq!(cli(&["frobnicate"]).0, 2);
}

#[test]
fn count_rows() {
    let (code, out, _) = cli(&["count", "--form", "s4", "--max", "10"]);
    assert_eq!(code, 0);
    let row: Vec<&str> = out.lines().nth(2).unwrap().split_whitespace().collect();
    assert_eq!(row, ["1", "8", "8", "ok"]);
    assert_eq!(cli(&["count", "--form", "s5", "--max", "10"]).0, 2);
}

#[test]
fn convolution_table() {
    let (code, out, _) = cli(&["convolution", "--name", "farkas_remark", "--max", "5", "--format", "csv"]);
    assert_eq!(code, 0);
    // σ(2) = 3
    assert_eq!(out.lines().nth(1), Some("0,3,3,ok"));
}

#[test]
fn verify_reports_and_schema() {
    let (code, out, _) = cli(&["verify", "--name", "jacobi_derivative", "deriv_1_half", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["name"], "jacobi_derivative");
    assert_eq!(v[0]["order"]["num"], 30);
    assert_eq!(v[0]["order"]["den"], 1);
    assert_eq!(v[0]["pass"], true);
    assert!(v[0]["first_failure"].is_null());
    assert_eq!(v[1]["name"], "deriv_1_half");
    let (code, out, _) = cli(&["verify", "--name", "deriv_1_half", "--order", "61/2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS deriv_1_half (below q^61/2)"), "{out}");
}

#[test]
fn out_writes_file_only() {
    let dir = std::env::temp_dir().join(format!("qtheta-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = cli(&["count", "--form", "t4", "--max", "3", "--format", "csv", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("n,count,formula,match\n0,16,16,ok\n1,64,64,ok"), "{written}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fk_verdicts() {
    let (code, out, _) = cli(&["fk", "--k", "5", "--order", "10"]);
    assert_eq!(code, 0);
    assert!(out.contains("vanishes, as expected"));
    assert_eq!(cli(&["fk", "--k", "9"]).0, 2);
}

#[test]
fn selftest_passes() {
    let (code, out, _) = cli(&["selftest"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().all(|l| l.starts_with("PASS")));
    assert!(out.contains("triple_product[1,9/13](1t)"));
}

#[test]
fn order_parsing() {
    assert_eq!(parse_order("30"), Ok(Rat::from_integer(30)));
    assert_eq!(parse_order("61/2"), Ok(Rat::new(61, 2)));
    assert_eq!(parse_order("7.25"), Ok(Rat::new(29, 4)));
    assert!(parse_order("0").is_err());
    assert!(parse_order("-1/2").is_err());
    assert!(parse_order("1/0").is_err());
    assert!(parse_order("x").is_err());
}

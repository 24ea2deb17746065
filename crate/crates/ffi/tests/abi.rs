use std::ffi::{CStr, CString};
use std::ptr;

use neurodavis_ffi::*;

fn last_error() -> String {
    let p = nd_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn two_blobs() -> (Vec<f64>, Vec<usize>) {
    let mut data = Vec::new();
    let mut labels = Vec::new();
    for i in 0..20 {
        let c = i % 2;
        let off = if c == 0 { -5.0 } else { 5.0 };
        let t = i as f64 * 0.1;
        data.extend_from_slice(&[off + t.sin() * 0.3, off + t.cos() * 0.3, off * 0.5]);
        labels.push(c);
    }
    (data, labels)
}

#[test]
fn dataset_round_trip() {
    let (data, labels) = two_blobs();
    let mut ds = ptr::null_mut();
    unsafe {
        assert_eq!(nd_dataset_from_rows(data.as_ptr(), 20, 3, labels.as_ptr(), &mut ds), NdStatus::Ok);
        assert!(nd_last_error_message().is_null());
        assert_eq!(nd_dataset_rows(ds), 20);
        assert_eq!(nd_dataset_cols(ds), 3);
        let mut back = vec![0.0; 60];
        assert_eq!(nd_dataset_copy_data(ds, back.as_mut_ptr(), back.len()), NdStatus::Ok);
        assert_eq!(back, data);
        let mut lab = vec![9usize; 20];
        assert_eq!(nd_dataset_copy_labels(ds, lab.as_mut_ptr(), 20), NdStatus::Ok);
        assert_eq!(lab, labels);
        let mut small = vec![0.0; 10];
        assert_eq!(nd_dataset_copy_data(ds, small.as_mut_ptr(), 10), NdStatus::InvalidArgument);
        assert!(last_error().contains("60 needed"));
        nd_dataset_free(ds);
    }
}

#[test]
fn fit_embed_save_load() {
    let (data, _) = two_blobs();
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("m.json").to_str().unwrap()).unwrap();
    let mut ds = ptr::null_mut();
    let mut model = ptr::null_mut();
    let mut cfg = nd_config_default();
    let hidden = [8usize];
    cfg.use_default_hidden = false;
    cfg.hidden_widths = hidden.as_ptr();
    cfg.hidden_count = 1;
    cfg.epochs = 200;
    cfg.seed = 3;
    unsafe {
        assert_eq!(nd_dataset_from_rows(data.as_ptr(), 20, 3, ptr::null(), &mut ds), NdStatus::Ok);
        assert_eq!(nd_model_fit(ds, &cfg, &mut model), NdStatus::Ok);
        assert_eq!(nd_model_n_samples(model), 20);
        assert_eq!(nd_model_latent_dim(model), 2);
        let mut y = vec![0.0; 40];
        assert_eq!(nd_model_embedding(model, y.as_mut_ptr(), 40), NdStatus::Ok);
        assert!(y.iter().all(|v| v.is_finite()));

        let mut rho = 0.0;
        assert_eq!(nd_distance_preservation(ds, y.as_ptr(), 2, 0, 0, &mut rho), NdStatus::Ok);
        assert!((-1.0..=1.0).contains(&rho));

        assert_eq!(nd_model_save(model, path.as_ptr()), NdStatus::Ok);
        let mut loaded = ptr::null_mut();
        assert_eq!(nd_model_load(path.as_ptr(), &mut loaded), NdStatus::Ok);
        let mut y2 = vec![0.0; 40];
        assert_eq!(nd_model_embedding(loaded, y2.as_mut_ptr(), 40), NdStatus::Ok);
        assert_eq!(y, y2);
        nd_model_free(loaded);
        nd_model_free(model);
        nd_dataset_free(ds);
    }
}

#[test]
fn fit_is_deterministic() {
    let kind = CString::new("spiral").unwrap();
    let mut cfg = nd_config_default();
    cfg.epochs = 20;
    let run = || unsafe {
        let mut ds = ptr::null_mut();
        assert_eq!(nd_dataset_generate(kind.as_ptr(), 1, &mut ds), NdStatus::Ok);
        let mut model = ptr::null_mut();
        assert_eq!(nd_model_fit(ds, &cfg, &mut model), NdStatus::Ok);
        let n = nd_model_n_samples(model);
        let mut y = vec![0.0; n * 2];
        assert_eq!(nd_model_embedding(model, y.as_mut_ptr(), y.len()), NdStatus::Ok);
        nd_model_free(model);
        nd_dataset_free(ds);
        y
    };
    let a = run();
    let b = run();
    assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
}

#[test]
fn errors_map_to_status_codes() {
    let mut ds = ptr::null_mut();
    let mut model = ptr::null_mut();
    unsafe {
        assert_eq!(nd_dataset_from_rows(ptr::null(), 2, 2, ptr::null(), &mut ds), NdStatus::InvalidArgument);
        assert!(last_error().contains("data is null"));

        let kind = CString::new("blob").unwrap();
        assert_eq!(nd_dataset_generate(kind.as_ptr(), 0, &mut ds), NdStatus::InvalidInput);
        assert!(last_error().contains("unknown dataset kind"));

        let missing = CString::new("/nonexistent/x.csv").unwrap();
        assert_eq!(nd_dataset_load_csv(missing.as_ptr(), ptr::null(), true, &mut ds), NdStatus::Io);

        let data = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(nd_dataset_from_rows(data.as_ptr(), 2, 2, ptr::null(), &mut ds), NdStatus::Ok);
        let mut cfg = nd_config_default();
        cfg.latent_dim = 0;
        assert_eq!(nd_model_fit(ds, &cfg, &mut model), NdStatus::InvalidConfig);
        assert!(model.is_null());

        let mut cfg = nd_config_default();
        cfg.learning_rate = 1e200;
        cfg.epochs = 5;
        assert_eq!(nd_model_fit(ds, &cfg, &mut model), NdStatus::Diverged);
        assert!(last_error().contains("diverged"));

        assert_eq!(nd_model_fit(ds, ptr::null(), &mut model), NdStatus::InvalidArgument);
        nd_dataset_free(ds);
        nd_dataset_free(ptr::null_mut());
        nd_model_free(ptr::null_mut());
        assert_eq!(nd_dataset_rows(ptr::null()), 0);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(nd_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

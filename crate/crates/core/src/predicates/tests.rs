use super::*;
use crate::frontend::{build_context, parse_text, NodeId};

/// Lines where the unary predicate holds for some node.
fn lines(pred: &str, src: &str) -> Vec<u32> {
    let ast = parse_text(src, "t.py").unwrap();
    let ctx = build_context(&ast);
    let view = FileView::new("t.py", &ast, &ctx);
    let reg = standard_registry();
    let p = reg.get(pred).unwrap_or_else(|| panic!("no predicate {pred}"));
    let mut out: Vec<u32> = ast
        .iter()
        .filter(|&n| p.call(&view, &[PredArg::Node(n)]))
        .map(|n| ast.span(n).line)
        .collect();
    out.dedup();
    out
}

fn holds(pred: &str, src: &str) -> bool {
    !lines(pred, src).is_empty()
}

const LISTING1_SMELLY: &str = "from sklearn.datasets import load_breast_cancer
from sklearn.svm import SVC
from sklearn.model_selection import train_test_split

data = load_breast_cancer()
X_train, X_val, y_train, y_val = train_test_split(data.data, data.target, test_size=0.3, random_state=42, stratify=data.target)

clf = SVC()
clf.fit(X_train, y_train)
";

#[test]
fn registry_size_and_duplicates() {
    let mut reg = core_registry();
    let before = reg.len();
    assert!(!reg.contains("hasEarlyStoppingCallback"));
    register_extensions(&mut reg).unwrap();
    assert_eq!(reg.len(), before + 1);
    assert_eq!(
        register_extensions(&mut reg),
        Err(RegistryError::DuplicatePredicate("hasEarlyStoppingCallback".into()))
    );
    assert_eq!(reg.len(), before + 1);
}

#[test]
fn zero_arity_is_rejected() {
    let mut reg = PredicateRegistry::empty();
    let err = reg.register(PredicateSignature::new("p", &[], ""), |_, _| true).unwrap_err();
    assert_eq!(err, RegistryError::ZeroArity("p".into()));
}

#[test]
fn ml_method_call() {
    assert_eq!(lines("isMLMethodCall", LISTING1_SMELLY), vec![8, 9]);
    assert!(!holds("isMLMethodCall", "print('x')\n"));
    assert!(holds(
        "isMLMethodCall",
        "import torch\nopt = torch.optim.Adam(model.parameters())\n"
    ));
    assert!(!holds("isMLMethodCall", "from sklearn.svm import SVC\nx.fit(a)\n"));
}

#[test]
fn explicit_hyperparameters() {
    let sig = |call: &str| {
        let src = format!("from sklearn.svm import SVC\nimport torch\nc = {call}\n");
        let ast = parse_text(&src, "t.py").unwrap();
        let ctx = build_context(&ast);
        let view = FileView::new("t.py", &ast, &ctx);
        let value = ast
            .iter()
            .find(|&n| ast.kind(n) == crate::frontend::NodeKind::Call)
            .unwrap();
        has_explicit_hyperparameters(&view, value)
    };
    assert!(!sig("SVC()"));
    assert!(sig("SVC(C=1.0, gamma='scale', kernel='rbf', random_state=0)"));
    assert!(sig("SVC(**cfg)"));
    assert!(sig("SVC(*args)"));
    assert!(sig("SVC(2.0)"));
    assert!(!sig("SVC(random_state=0)"));
    assert!(!sig("torch.optim.Adam(model.parameters())"));
    assert!(sig("torch.optim.Adam(model.parameters(), lr=1e-3)"));
    assert!(sig("print(1)"));
}

#[test]
fn train_test_split_ordering() {
    let smelly = "from sklearn.model_selection import train_test_split\nfrom sklearn.preprocessing import StandardScaler\n\nX_scaled = StandardScaler().fit_transform(X)\nX_train, X_test, y_train, y_test = train_test_split(X_scaled, y, test_size=0.3, random_state=42)\n";
    assert_eq!(lines("usedBeforeTrainTestSplit", smelly), vec![4]);
    let fixed = "from sklearn.model_selection import train_test_split\nfrom sklearn.preprocessing import StandardScaler\n\nX_train, X_test, y_train, y_test = train_test_split(X, y,\n test_size=0.3, random_state=42)\nscaler = StandardScaler().fit(X_train)\nX_train, X_test = scaler.transform(X_train), scaler.transform(X_test)\n";
    assert!(!holds("usedBeforeTrainTestSplit", fixed));
    let no_split = "from sklearn.preprocessing import StandardScaler\nX = StandardScaler().fit_transform(X)\n";
    assert!(!holds("usedBeforeTrainTestSplit", no_split));
}

#[test]
fn scale_sensitive_estimators() {
    assert_eq!(lines("isScaleSensitiveEstimator", LISTING1_SMELLY), vec![9]);
    assert!(!holds(
        "isScaleSensitiveEstimator",
        "from sklearn.tree import DecisionTreeClassifier as T\nT().fit(X, y)\n"
    ));
    let scaled = "from sklearn.svm import SVC\nfrom sklearn.preprocessing import MinMaxScaler\ns = MinMaxScaler()\nX = s.fit_transform(X)\nSVC(C=1).fit(X, y)\n";
    assert_eq!(lines("fileFitsScalerBefore", scaled), vec![5]);
    assert!(!holds("fileFitsScalerBefore", LISTING1_SMELLY));
}

#[test]
fn eval_without_train() {
    let smelly = "import torch.nn as nn\nmodel = nn.Linear(2, 2)\nmodel.eval()\nfor x in data:\n    loss = model(x).sum()\n    loss.backward()\n";
    assert_eq!(lines("modelEvalWithoutLaterTrain", smelly), vec![3]);
    let fixed = smelly.replace("model.eval()\n", "model.eval()\nmodel.train()\n");
    assert!(!holds("modelEvalWithoutLaterTrain", &fixed));
    let eval_only = "import torch.nn as nn\nmodel = nn.Linear(2, 2)\nmodel.eval()\npred = model(x)\n";
    assert!(!holds("modelEvalWithoutLaterTrain", eval_only));
}

#[test]
fn forward_calls() {
    let src = "import torch.nn as nn\nnet = nn.Linear(2, 2)\ny = net.forward(x)\nz = super().forward(x)\nw = other.forward(x)\n";
    assert_eq!(lines("isForwardCallOnModel", src), vec![3]);
}

#[test]
fn backward_without_zero_grad() {
    let smelly = "for x in data:\n    loss = f(x)\n    loss.backward()\n    opt.step()\n";
    assert_eq!(lines("loopContainsBackwardWithoutZeroGrad", smelly), vec![3]);
    let fixed = "for x in data:\n    opt.zero_grad()\n    loss = f(x)\n    loss.backward()\n";
    assert!(!holds("loopContainsBackwardWithoutZeroGrad", fixed));
    assert!(!holds("loopContainsBackwardWithoutZeroGrad", "loss.backward()\n"));
}

#[test]
fn model_in_loop() {
    let smelly = "from keras.models import Sequential\nfor i in range(3):\n    m = Sequential()\n    m2 = Sequential()\n";
    assert_eq!(lines("buildsModelInsideLoopWithoutFree", smelly), vec![3]);
    let freed = "from keras.models import Sequential\nimport gc\nfor i in range(3):\n    m = Sequential()\n    gc.collect()\n";
    assert!(!holds("buildsModelInsideLoopWithoutFree", freed));
    let outside = "from keras.models import Sequential\nm = Sequential()\n";
    assert!(!holds("buildsModelInsideLoopWithoutFree", outside));
}

#[test]
fn early_stopping() {
    let src = "from keras.models import Sequential\nfrom keras.callbacks import EarlyStopping\nm = Sequential()\nes = EarlyStopping(patience=2)\nm.fit(X, y, callbacks=[es])\nm.fit(X, y)\nm.fit(X, y, callbacks=[EarlyStopping()])\n";
    assert_eq!(lines("isNeuralFitCall", src), vec![5, 6, 7]);
    assert_eq!(lines("hasEarlyStoppingCallback", src), vec![5, 7]);
}

#[test]
fn determinism() {
    let src = "import torch\nimport numpy\nmodel.fit(x)\n";
    assert_eq!(lines("isFirstDeepLearningImport", src), vec![1]);
    assert!(holds("fileTrainsModel", src));
    assert!(!holds("fileEnablesDeterminism", src));
    assert!(holds(
        "fileEnablesDeterminism",
        "import torch\ntorch.use_deterministic_algorithms(True)\n"
    ));
    assert!(holds(
        "fileEnablesDeterminism",
        "import torch\ntorch.backends.cudnn.deterministic = True\n"
    ));
    assert!(holds("fileEnablesDeterminism", "import os\nos.environ['TF_DETERMINISTIC_OPS'] = '1'\n"));
    assert!(!holds("isFirstDeepLearningImport", "import numpy\nfrom .torch import x\n"));
}

#[test]
fn tiles() {
    let smelly = "import tensorflow as tf\n\ntensors = [tf.tile(x, [1, 10]) for x in inputs]\n";
    assert_eq!(lines("isTileCall", smelly), vec![3]);
    assert_eq!(lines("isInsideLoopOrComprehension", smelly), vec![3]);
    let fixed = "import tensorflow as tf\n\ntensors = inputs * tf.constant([1, 10])\n";
    assert!(!holds("isTileCall", fixed));
    let arithmetic = "import numpy as np\nt = np.tile(a, (3, 1))\ny = t + b\n";
    assert!(lines("usedInElementwiseArithmetic", arithmetic).contains(&2));
    let printed = "import numpy as np\nt = np.tile(a, (3, 1))\nprint(t)\n";
    assert!(!holds("usedInElementwiseArithmetic", printed));
}

#[test]
fn randomness() {
    let src = "import numpy as np\nimport random\nx = np.random.rand(3)\ny = random.random()\n";
    assert_eq!(lines("isFirstRandomApiCall", src), vec![3]);
    assert!(!holds("fileSetsGlobalSeed", src));
    assert!(holds("fileSetsGlobalSeed", "import numpy as np\nnp.random.seed(0)\n"));
    assert!(!holds("isRandomApiCall", "import numpy as np\nr = np.random.default_rng(0).normal()\n"));
    assert!(holds("isRandomApiCall", "import numpy as np\nr = np.random.default_rng()\n"));
}

#[test]
fn concat_growth() {
    let smelly = "import numpy as np\nfor b in batches:\n    out = np.concatenate([out, b])\n";
    assert_eq!(lines("isConcatGrowthInLoop", smelly), vec![3]);
    assert!(!holds(
        "isConcatGrowthInLoop",
        "import numpy as np\nparts = []\nfor b in batches:\n    parts.append(b)\nout = np.concatenate(parts)\n"
    ));
}

#[test]
fn unmasked_log() {
    assert!(holds("isLogCallUnmasked", "import numpy as np\ny = np.log(x)\n"));
    assert!(!holds("isLogCallUnmasked", "import numpy as np\ny = np.log(np.clip(x, 1e-9, None))\n"));
    assert!(!holds("isLogCallUnmasked", "import numpy as np\ny = np.log(x + 1e-8)\n"));
    assert!(!holds("isLogCallUnmasked", "import numpy as np\ny = np.log(x + eps)\n"));
    assert!(holds("isLogCallUnmasked", "import torch\ny = torch.div(a, b)\n"));
    assert!(!holds("isLogCallUnmasked", "import math\ny = math.log(2)\n"));
}

#[test]
fn matrix_dot() {
    let src = "import numpy as np\na = np.random.rand(3, 3)\nb = np.ones((3, 3))\nc = np.dot(a, b)\nd = np.dot(v, w)\n";
    assert_eq!(lines("isDotCall", src), vec![4, 5]);
    assert_eq!(lines("hasMatrixOperands", src), vec![4]);
    let vec_dot = "import numpy as np\nv = np.array([1, 2])\nnp.dot(v, v)\n";
    assert!(!holds("hasMatrixOperands", vec_dot));
}

#[test]
fn dataframe_predicates() {
    let df = "import pandas as pd\ndf = pd.read_csv('a.csv')\n";
    let with = |tail: &str| format!("{df}{tail}");
    assert_eq!(lines("isEmptyColumnInitLiteral", &with("df['new'] = 0\ndf['s'] = ''\ndf['x'] = 1\n")), vec![3, 4]);
    assert_eq!(lines("isValuesAttributeOnDataFrame", &with("a = df.values\nb = other.values\n")), vec![3]);
    assert_eq!(lines("isMergeCall", &with("m = df.merge(o)\nn = pd.merge(df, o, how='inner', on='k')\n")), vec![3, 4]);
    assert_eq!(lines("hasMergeKeysExplicit", &with("n = pd.merge(df, o, on='k')\n")), vec![3]);
    assert_eq!(
        lines(
            "isInPlaceCapableCallWithUnusedResult",
            &with("df.dropna()\ndf.dropna(inplace=True)\ndf = df.dropna()\n")
        ),
        vec![3]
    );
    assert_eq!(
        lines(
            "isIterrowsLoop",
            &with("for i, r in df.iterrows():\n    pass\nfor i in range(len(df)):\n    pass\nfor c in df.columns:\n    pass\n")
        ),
        vec![3, 5]
    );
    assert_eq!(lines("isChainedDataFrameSubscript", &with("x = df['a']['b']\ny = df.loc['a', 'b']\n")), vec![3]);
    assert_eq!(lines("isDataFrameRead", df), vec![2]);
}

#[test]
fn nan_comparisons() {
    assert!(holds("isNanEqualityComparison", "import numpy as np\nm = x == np.nan\n"));
    assert!(holds("isNanEqualityComparison", "from numpy import nan\nm = x != nan\n"));
    assert!(holds("isNanEqualityComparison", "m = x == float('nan')\n"));
    assert!(!holds("isNanEqualityComparison", "import numpy as np\nm = np.isnan(x)\n"));
    assert!(!holds("isNanEqualityComparison", "import numpy as np\nm = x is np.nan\n"));
}

#[test]
fn metrics() {
    let src = "from sklearn.metrics import f1_score, roc_auc_score\ns = f1_score(y, p)\na = roc_auc_score(y, q)\n";
    assert_eq!(lines("isThresholdDependentMetricCall", src), vec![2]);
    assert!(holds("fileUsesThresholdIndependentMetric", src));
    assert!(!holds(
        "fileUsesThresholdIndependentMetric",
        "from sklearn.metrics import f1_score\ns = f1_score(y, p)\n"
    ));
}

#[test]
fn keyword_argument_predicate() {
    let src = "import pandas as pd\na = pd.read_csv('f.csv')\nb = pd.read_csv('f.csv', index_col=0)\n";
    let ast = parse_text(src, "t.py").unwrap();
    let ctx = build_context(&ast);
    let view = FileView::new("t.py", &ast, &ctx);
    let reads: Vec<NodeId> = ast.iter().filter(|&n| is_data_frame_read(&view, n)).collect();
    assert_eq!(reads.len(), 2);
    let check = |n| has_keyword_argument(&view, &[PredArg::Node(n), PredArg::Str("index_col")]);
    assert!(!check(reads[0]));
    assert!(check(reads[1]));
}

#[test]
fn alias_renaming_does_not_change_results() {
    let a = "import tensorflow as tf\nimport numpy as np\ny = [tf.tile(x, [2]) for x in xs]\nz = np.log(x)\nm = x == np.nan\n";
    let b = a.replace("as tf", "as T").replace("tf.", "T.").replace("as np", "as N").replace("np.", "N.");
    let reg = standard_registry();
    for sig in reg.signatures().filter(|s| s.arity() == 1) {
        assert_eq!(lines(&sig.name, a), lines(&sig.name, &b), "{}", sig.name);
    }
}

#[test]
fn predicates_are_total_and_pure() {
    let src = "import pandas as pd\n@dec\nclass A(B):\n    def f(self, *a, **k):\n        return [x async for x in y] if z else {**k}\nlambda: (yield)\nmatch p:\n    case [1, *rest]:\n        pass\n";
    let ast = parse_text(src, "t.py").unwrap();
    let ctx = build_context(&ast);
    let view = FileView::new("t.py", &ast, &ctx);
    let reg = standard_registry();
    for sig in reg.signatures().filter(|s| s.arity() == 1) {
        let p = reg.get(&sig.name).unwrap();
        for n in ast.iter() {
            let first = p.call(&view, &[PredArg::Node(n)]);
            assert_eq!(first, p.call(&view, &[PredArg::Node(n)]));
        }
    }
}
